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

#ifndef NEPT_SOFT_TAPE_HPP_
#define NEPT_SOFT_TAPE_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "nept/soft/value.hpp"

namespace nept::soft {

enum class OpKind : std::uint8_t {
  Leaf,
  Min2,        // elementwise min, same shape
  Max2,        // elementwise max, same shape
  OneMinus,    // elementwise 1 - x
  Relate,      // out_x = min(1, sum_y a_y * b_xy), a vector, b matrix
  RelateLit,   // out_x = min(1, a_x * sum_y b_xy)
  ReduceMax,   // vector -> scalar
  ReduceMin,   // vector -> scalar
  ReduceSum,   // vector -> scalar (soft count)
  Softmax,     // vector -> vector, unit temperature
  CmpEq,       // sigma(tau * (gamma - |s1 - s2|) / gamma)
  CmpGt,       // sigma(tau * (s1 - s2 - 1 + gamma))
  Extract,     // vector -> scalar at a fixed index
  ExtractRow,  // matrix -> vector, one row
  AddS,        // scalar arithmetic (soft counts)
  SubS,
  MulS,
  DivS,
  AbsS,
};

struct TapeNode {
  OpKind op = OpKind::Leaf;
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  std::vector<double> out;       // forward result, flat row-major
  std::vector<std::int32_t> sel; // selectors: Min2/Max2 winners, reduce argidx, extract index
  std::vector<double> aux;       // op extras: relate pre-clamp sums, compare tau/gamma
  int n = 0;                     // N for vector/matrix outputs, 0 for scalar
  bool matrix = false;
};

/// Append-only record of soft operations for reverse-mode differentiation.
/// Node inputs always precede the node, so the node list is topologically
/// ordered by construction. A tape is confined to a single execution.
class Tape {
 public:
  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Records v as a leaf and returns a copy bound to the new node.
  SoftValue leaf(const SoftValue& v);

  NodeId push(TapeNode node);
  const TapeNode& node(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }
  const std::vector<TapeNode>& nodes() const { return nodes_; }
  std::uint64_t id() const { return id_; }

  /// True if id names a Leaf node on this tape.
  bool is_leaf(NodeId id) const;

 private:
  std::uint64_t id_;
  std::vector<TapeNode> nodes_;
};

/// Adjoints per leaf node, same element layout as the leaf's data.
using GradientMap = std::map<NodeId, std::vector<double>>;

}  // namespace nept::soft

#endif  // NEPT_SOFT_TAPE_HPP_
