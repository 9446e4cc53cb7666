/* Copyright 2026 The Nept Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NEPT_SOFT_OPS_HPP_
#define NEPT_SOFT_OPS_HPP_

#include "nept/soft/tape.hpp"
#include "nept/soft/value.hpp"

namespace nept::soft {

enum class Connective : std::uint8_t { And, Or, Implies, Not };
enum class Quantifier : std::uint8_t { Exists, Forall, Count, Iota };
enum class Compare : std::uint8_t { Eq, Gt };

/// Numerically stable logistic function.
double sigmoid(double z);

/// Numerically stable softmax over raw reals (subtracts the max before
/// exponentiation). temp scales the inputs as x/temp and must be > 0.
std::vector<double> softmax(const std::vector<double>& x, double temp = 1.0);

/// Fuzzy connectives. And/Or/Implies are elementwise over identical shapes;
/// And with a vector lhs and matrix rhs dispatches to relate(). Not is unary
/// and rejects an rhs. Soft counts are not valid connective operands.
SoftValue connective(Tape& tape, Connective kind, const SoftValue& lhs);
SoftValue connective(Tape& tape, Connective kind, const SoftValue& lhs,
                     const SoftValue& rhs);

/// Relational conjunction: result_x = min(1, sum_y alpha_y * beta_xy).
/// With literal=true uses the row-independent reading
/// result_x = min(1, alpha_x * sum_y beta_xy).
SoftValue relate(Tape& tape, const SoftValue& alpha, const SoftValue& beta,
                 bool literal = false);

/// Exists -> max, Forall -> min, Count -> unclamped sum (a soft count),
/// Iota -> softmax at unit temperature. Input must be a nonempty vector.
SoftValue quantify(Tape& tape, Quantifier kind, const SoftValue& v);

/// Smoothed scalar comparisons over probabilities or soft counts:
///   Eq: sigma(tau * (gamma - |s1 - s2|) / gamma)
///   Gt: sigma(tau * (s1 - s2 - 1 + gamma))
SoftValue soft_compare(Tape& tape, Compare kind, const SoftValue& s1,
                       const SoftValue& s2, const SmoothingParams& p);

/// Scalar arithmetic over soft counts (and promoted numbers). Results are
/// count-flavored and stay differentiable.
enum class Arith : std::uint8_t { Add, Sub, Mul, Div };
SoftValue arith(Tape& tape, Arith kind, const SoftValue& s1,
                const SoftValue& s2);
SoftValue abs_value(Tape& tape, const SoftValue& s);

/// Element extraction; records the adjoint-routing node.
SoftValue extract(Tape& tape, const SoftValue& v, int index);
SoftValue extract_row(Tape& tape, const SoftValue& m, int row);

/// Reverse accumulation from a scalar output recorded on this tape.
/// min/max route the full adjoint to the selected argument (ties: lowest
/// index); softmax applies its full Jacobian; |.| uses the sign subgradient
/// with 0 at the kink. Returns adjoints for every leaf node.
GradientMap backward(const Tape& tape, const SoftValue& output);

}  // namespace nept::soft

#endif  // NEPT_SOFT_OPS_HPP_
