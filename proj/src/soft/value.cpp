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

#include "nept/soft/value.hpp"

#include <cmath>
#include <string>

namespace nept::soft {

namespace {

void check_range(const std::vector<double>& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = data[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw SoftError("SoftValue: element " + std::to_string(i) + " = " +
                      std::to_string(v) + " outside [0, 1]");
    }
  }
}

}  // namespace

SoftValue SoftValue::scalar(double v) {
  std::vector<double> d{v};
  check_range(d);
  return detail::Access::make(Shape::Scalar, 1, std::move(d), kNoNode, 0,
                              false);
}

SoftValue SoftValue::vector(std::vector<double> v) {
  if (v.empty()) throw SoftError("SoftValue: vector must be nonempty");
  check_range(v);
  const int n = static_cast<int>(v.size());
  return detail::Access::make(Shape::Vector, n, std::move(v), kNoNode, 0,
                              false);
}

SoftValue SoftValue::matrix(int n, std::vector<double> v) {
  if (n <= 0) throw SoftError("SoftValue: matrix dimension must be positive");
  if (v.size() != static_cast<std::size_t>(n) * n)
    throw SoftError("SoftValue: matrix data size does not match " +
                    std::to_string(n) + "x" + std::to_string(n));
  check_range(v);
  return detail::Access::make(Shape::Matrix, n, std::move(v), kNoNode, 0,
                              false);
}

SoftValue SoftValue::count(double v) {
  if (!std::isfinite(v))
    throw SoftError("SoftValue: soft count must be finite");
  return detail::Access::make(Shape::Scalar, 1, std::vector<double>{v},
                              kNoNode, 0, true);
}

double SoftValue::as_scalar() const {
  if (shape_ != Shape::Scalar)
    throw SoftError("SoftValue: as_scalar() on a non-scalar value");
  return data_[0];
}

namespace detail {

SoftValue Access::make(Shape shape, int n, std::vector<double> data,
                       NodeId node, std::uint64_t tape_id, bool is_count) {
  SoftValue v;
  v.shape_ = shape;
  v.n_ = n;
  v.data_ = std::move(data);
  v.node_ = node;
  v.tape_id_ = tape_id;
  v.is_count_ = is_count;
  return v;
}

}  // namespace detail

}  // namespace nept::soft
