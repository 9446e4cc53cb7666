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

#include "nept/soft/tape.hpp"

#include <atomic>
#include <limits>
#include <string>

namespace nept::soft {

namespace {
std::atomic<std::uint64_t> g_next_tape_id{1};
}

Tape::Tape() : id_(g_next_tape_id.fetch_add(1)) {}

SoftValue Tape::leaf(const SoftValue& v) {
  TapeNode node;
  node.op = OpKind::Leaf;
  node.out = v.data();
  node.n = v.is_scalar() ? 0 : v.dim();
  node.matrix = v.is_matrix();
  const NodeId id = push(std::move(node));
  return detail::Access::make(v.shape(), v.dim(), v.data(), id, id_,
                              v.is_count());
}

NodeId Tape::push(TapeNode node) {
  if (nodes_.size() >= static_cast<std::size_t>(
                           std::numeric_limits<NodeId>::max()))
    throw SoftError("Tape: node limit exceeded");
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

const TapeNode& Tape::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
    throw SoftError("Tape: node id " + std::to_string(id) + " out of range");
  return nodes_[static_cast<std::size_t>(id)];
}

bool Tape::is_leaf(NodeId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < nodes_.size() &&
         nodes_[static_cast<std::size_t>(id)].op == OpKind::Leaf;
}

}  // namespace nept::soft
