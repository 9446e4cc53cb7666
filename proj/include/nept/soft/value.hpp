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

#ifndef NEPT_SOFT_VALUE_HPP_
#define NEPT_SOFT_VALUE_HPP_

#include <cstdint>
#include <vector>

#include "nept/error.hpp"

namespace nept::soft {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class Shape : std::uint8_t { Scalar, Vector, Matrix };

/// Temperature and margin of the smoothed scalar comparisons.
struct SmoothingParams {
  double tau = 0.25;
  double gamma = 0.25;

  void validate() const {
    if (!(tau > 0.0)) throw SoftError("SmoothingParams: tau must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0))
      throw SoftError("SmoothingParams: gamma must be in (0, 1]");
  }
};

namespace detail {
struct Access;
}

/// A probability-like tensor: a scalar, a length-N vector, or an N x N
/// matrix with every element in [0, 1]. A scalar may instead be flagged as a
/// soft count, in which case it is an unclamped nonnegative sum of scores and
/// is only consumable by comparisons, arithmetic, and finalization.
///
/// Values are immutable after construction. When produced by an operator they
/// carry the id of their node on the owning Tape.
class SoftValue {
 public:
  static SoftValue scalar(double v);
  static SoftValue vector(std::vector<double> v);
  /// Row-major square matrix; data.size() must equal n*n.
  static SoftValue matrix(int n, std::vector<double> v);
  /// Soft count: unclamped scalar, must be finite (count() outputs are >= 0;
  /// arithmetic on counts may leave that range).
  static SoftValue count(double v);

  Shape shape() const { return shape_; }
  bool is_count() const { return is_count_; }
  bool is_scalar() const { return shape_ == Shape::Scalar; }
  bool is_vector() const { return shape_ == Shape::Vector; }
  bool is_matrix() const { return shape_ == Shape::Matrix; }

  /// N for vectors and matrices; 1 for scalars.
  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  const std::vector<double>& data() const { return data_; }
  double as_scalar() const;
  double at(int i) const { return data_[static_cast<std::size_t>(i)]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * n_ + c];
  }

  NodeId node() const { return node_; }
  bool on_tape() const { return node_ != kNoNode; }
  std::uint64_t tape_id() const { return tape_id_; }

 private:
  friend struct detail::Access;
  SoftValue() = default;

  Shape shape_ = Shape::Scalar;
  int n_ = 1;
  std::vector<double> data_;
  NodeId node_ = kNoNode;
  std::uint64_t tape_id_ = 0;
  bool is_count_ = false;
};

namespace detail {
/// Internal constructor used by the operator implementations; bypasses the
/// [0,1] range check (operators guarantee range by construction).
struct Access {
  static SoftValue make(Shape shape, int n, std::vector<double> data,
                        NodeId node, std::uint64_t tape_id, bool is_count);
};
}  // namespace detail

}  // namespace nept::soft

#endif  // NEPT_SOFT_VALUE_HPP_
