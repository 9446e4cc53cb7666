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

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "doctest.h"
#include "nept/soft/ops.hpp"
#include "support/expr_gen.hpp"

using namespace nept;
using nept::soft::SoftValue;
using nept::soft::Tape;

namespace {

SoftValue vec(std::vector<double> v) { return SoftValue::vector(std::move(v)); }

double eval_at(testsupport::ExprGen& gen, const std::vector<double>& data) {
  Tape tape;
  std::vector<double> d = data;
  return gen.build(tape, d).as_scalar();
}

}  // namespace

TEST_SUITE("soft.backward") {
  TEST_CASE("max reduction routes the adjoint to the winner") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.2, 0.9, 0.4}));
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Exists, v);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(v.node()) == std::vector<double>{0.0, 1.0, 0.0});
  }

  TEST_CASE("min reduction routes the adjoint to the loser") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.2, 0.9, 0.4}));
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Forall, v);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(v.node()) == std::vector<double>{1.0, 0.0, 0.0});
  }

  TEST_CASE("reduction ties pick the lowest index") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.7, 0.7, 0.7}));
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Exists, v);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(v.node()) == std::vector<double>{1.0, 0.0, 0.0});
  }

  TEST_CASE("count spreads a unit adjoint over every element") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.9, 0.8, 0.7, 0.6}));
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Count, v);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(v.node()) == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  }

  TEST_CASE("elementwise min ties route to the left operand") {
    Tape tape;
    const SoftValue a = tape.leaf(vec({0.5, 0.2}));
    const SoftValue b = tape.leaf(vec({0.5, 0.8}));
    const SoftValue m = soft::connective(tape, soft::Connective::And, a, b);
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Count, m);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(a.node()) == std::vector<double>{1.0, 1.0});
    CHECK(grads.at(b.node()) == std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("smoothed equality gradient matches the frozen value") {
    Tape tape;
    const SoftValue s1 = tape.leaf(SoftValue::scalar(0.8));
    const SoftValue s2 = tape.leaf(SoftValue::scalar(0.3));
    const SoftValue out = soft::soft_compare(tape, soft::Compare::Eq, s1, s2,
                                             soft::SmoothingParams{});
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(s1.node())[0] == doctest::Approx(-0.24614).epsilon(1e-5));
    CHECK(grads.at(s2.node())[0] == doctest::Approx(0.24614).epsilon(1e-5));
  }

  TEST_CASE("equality gradient vanishes at the kink") {
    Tape tape;
    const SoftValue s1 = tape.leaf(SoftValue::scalar(0.4));
    const SoftValue s2 = tape.leaf(SoftValue::scalar(0.4));
    const SoftValue out = soft::soft_compare(tape, soft::Compare::Eq, s1, s2,
                                             soft::SmoothingParams{});
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(s1.node())[0] == 0.0);
    CHECK(grads.at(s2.node())[0] == 0.0);
  }

  TEST_CASE("greater-than gradient is antisymmetric in its operands") {
    Tape tape;
    const SoftValue s1 = tape.leaf(SoftValue::count(5.0));
    const SoftValue s2 = tape.leaf(SoftValue::count(3.0));
    const SoftValue out = soft::soft_compare(tape, soft::Compare::Gt, s1, s2,
                                             soft::SmoothingParams{});
    const auto grads = soft::backward(tape, out);
    const double g = grads.at(s1.node())[0];
    CHECK(g == doctest::Approx(0.06100).epsilon(1e-4));
    CHECK(grads.at(s2.node())[0] == doctest::Approx(-g).epsilon(1e-12));
  }

  TEST_CASE("relate propagates through unclamped rows only") {
    Tape tape;
    const SoftValue alpha = tape.leaf(vec({0.9, 0.8}));
    const SoftValue beta =
        tape.leaf(SoftValue::matrix(2, {0.9, 0.9, 0.1, 0.0}));
    // Row 0 sums to 0.81 + 0.72 = 1.53 and clamps; row 1 sums to 0.09.
    const SoftValue r = soft::relate(tape, alpha, beta);
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Count, r);
    const auto grads = soft::backward(tape, out);
    // Only row 1 contributes: d r1 / d alpha = beta[1][.], d r1 / d beta[1][y] = alpha_y.
    CHECK(grads.at(alpha.node()) == std::vector<double>{0.1, 0.0});
    CHECK(grads.at(beta.node()) ==
          std::vector<double>{0.0, 0.0, 0.9, 0.8});
  }

  TEST_CASE("relate clamp is flat exactly at a unit row sum") {
    Tape tape;
    const SoftValue alpha = tape.leaf(vec({1.0, 1.0}));
    const SoftValue beta =
        tape.leaf(SoftValue::matrix(2, {0.5, 0.5, 0.0, 0.0}));
    const SoftValue r = soft::relate(tape, alpha, beta);
    CHECK(r.at(0) == 1.0);
    const SoftValue out = soft::extract(tape, r, 0);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(alpha.node()) == std::vector<double>{0.0, 0.0});
    CHECK(grads.at(beta.node()) == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  }

  TEST_CASE("softmax applies its full jacobian") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.9, 0.1, 0.3}));
    const SoftValue d = soft::quantify(tape, soft::Quantifier::Iota, v);
    const SoftValue out = soft::extract(tape, d, 0);
    const auto grads = soft::backward(tape, out);
    // d y0 / d x_i = y0 * (delta_0i - y_i).
    const double y0 = d.at(0);
    CHECK(grads.at(v.node())[0] ==
          doctest::Approx(y0 * (1.0 - y0)).epsilon(1e-12));
    CHECK(grads.at(v.node())[1] ==
          doctest::Approx(-y0 * d.at(1)).epsilon(1e-12));
    CHECK(grads.at(v.node())[2] ==
          doctest::Approx(-y0 * d.at(2)).epsilon(1e-12));
  }

  TEST_CASE("a leaf used twice accumulates both contributions") {
    Tape tape;
    const SoftValue x = tape.leaf(SoftValue::count(0.6));
    const SoftValue out = soft::arith(tape, soft::Arith::Mul, x, x);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(x.node())[0] == doctest::Approx(1.2).epsilon(1e-12));
  }

  TEST_CASE("division differentiates the quotient rule") {
    Tape tape;
    const SoftValue a = tape.leaf(SoftValue::count(3.0));
    const SoftValue b = tape.leaf(SoftValue::count(2.0));
    const SoftValue out = soft::arith(tape, soft::Arith::Div, a, b);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(a.node())[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(grads.at(b.node())[0] == doctest::Approx(-0.75).epsilon(1e-12));
  }

  TEST_CASE("abs uses the sign subgradient with zero at the kink") {
    Tape tape;
    const SoftValue neg = tape.leaf(SoftValue::count(-2.0));
    const SoftValue out_n = soft::abs_value(tape, neg);
    CHECK(soft::backward(tape, out_n).at(neg.node())[0] == -1.0);

    Tape tape2;
    const SoftValue zero = tape2.leaf(SoftValue::count(0.0));
    const SoftValue out_z = soft::abs_value(tape2, zero);
    CHECK(soft::backward(tape2, out_z).at(zero.node())[0] == 0.0);
  }

  TEST_CASE("complement chains flip the sign") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.2, 0.9}));
    const SoftValue out = soft::quantify(
        tape, soft::Quantifier::Exists,
        soft::connective(tape, soft::Connective::Not, v));
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(v.node()) == std::vector<double>{-1.0, 0.0});
  }

  TEST_CASE("row extraction routes adjoints into the right row") {
    Tape tape;
    const SoftValue m =
        tape.leaf(SoftValue::matrix(2, {0.1, 0.2, 0.3, 0.4}));
    const SoftValue row = soft::extract_row(tape, m, 1);
    const SoftValue out = soft::quantify(tape, soft::Quantifier::Count, row);
    const auto grads = soft::backward(tape, out);
    CHECK(grads.at(m.node()) == std::vector<double>{0.0, 0.0, 1.0, 1.0});
  }

  TEST_CASE("every leaf appears in the gradient map") {
    Tape tape;
    const SoftValue a = tape.leaf(vec({0.2, 0.7}));
    const SoftValue b = tape.leaf(vec({0.6, 0.1}));
    const SoftValue unused = tape.leaf(SoftValue::scalar(0.5));
    const SoftValue out = soft::quantify(
        tape, soft::Quantifier::Exists,
        soft::connective(tape, soft::Connective::And, a, b));
    const auto grads = soft::backward(tape, out);
    CHECK(grads.size() == 3);
    CHECK(grads.at(unused.node()) == std::vector<double>{0.0});
  }

  TEST_CASE("output must be a scalar recorded on the queried tape") {
    Tape tape;
    const SoftValue v = tape.leaf(vec({0.2, 0.7}));
    CHECK_THROWS_AS(soft::backward(tape, v), SoftError);
    CHECK_THROWS_AS(soft::backward(tape, SoftValue::scalar(0.5)), SoftError);
    Tape other;
    const SoftValue s = other.leaf(SoftValue::scalar(0.5));
    CHECK_THROWS_AS(soft::backward(tape, s), SoftError);
  }
}

TEST_SUITE("soft.gradcheck") {
  TEST_CASE("backward matches central differences on random expressions") {
    int elements_checked = 0;
    for (std::uint64_t seed = 1; seed <= 48; ++seed) {
      CAPTURE(seed);
      testsupport::ExprGen gen(seed);
      std::vector<double> data;
      std::unique_ptr<Tape> tape;
      std::optional<SoftValue> out;
      for (int tries = 0; tries < 64; ++tries) {
        data.clear();
        tape = std::make_unique<Tape>();
        out = gen.build(*tape, data);
        if (testsupport::ExprGen::tie_margin(*tape) >= 1e-4) break;
        gen.resample();
      }
      REQUIRE(testsupport::ExprGen::tie_margin(*tape) >= 1e-4);

      const auto grads = soft::backward(*tape, *out);
      const double h = 1e-6;
      for (const auto& leaf : gen.leaves()) {
        const auto& g = grads.at(leaf.node);
        REQUIRE(g.size() == leaf.size);
        for (std::size_t j = 0; j < leaf.size; ++j) {
          std::vector<double> up = data;
          std::vector<double> dn = data;
          up[leaf.offset + j] += h;
          dn[leaf.offset + j] -= h;
          const double fd = (eval_at(gen, up) - eval_at(gen, dn)) / (2.0 * h);
          CAPTURE(leaf.offset + j);
          CHECK(g[j] == doctest::Approx(fd).epsilon(5e-6));
          ++elements_checked;
        }
      }
    }
    // The sweep must have exercised a meaningful amount of structure.
    CHECK(elements_checked > 300);
  }

  TEST_CASE("replayed builds are structurally identical") {
    testsupport::ExprGen gen(7);
    std::vector<double> data;
    Tape t1;
    const SoftValue o1 = gen.build(t1, data);
    std::vector<double> copy = data;
    Tape t2;
    const SoftValue o2 = gen.build(t2, copy);
    REQUIRE(t1.size() == t2.size());
    CHECK(copy == data);
    CHECK(o1.as_scalar() == o2.as_scalar());
    for (std::size_t i = 0; i < t1.size(); ++i) {
      const auto id = static_cast<soft::NodeId>(i);
      CHECK(t1.node(id).op == t2.node(id).op);
      CHECK(t1.node(id).out == t2.node(id).out);
    }
  }
}
