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

#include <array>
#include <string_view>

#include "nept/lang/ast.hpp"

namespace nept::lang {

bool is_method_name(const std::string& name) {
  static constexpr std::array<std::string_view, 5> kNames = {
      "exists", "forall", "count", "iota", "implies"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

bool is_builtin_name(const std::string& name) {
  static constexpr std::array<std::string_view, 6> kNames = {
      "score", "query", "len", "str", "int", "abs"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

namespace {

bool equal_blocks(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(*a[i], *b[i])) return false;
  return true;
}

bool equal_exprs(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(*a[i], *b[i])) return false;
  return true;
}

bool node_equal(const IntLit& a, const IntLit& b) { return a.value == b.value; }
bool node_equal(const FloatLit& a, const FloatLit& b) {
  return a.value == b.value;
}
bool node_equal(const StrLit& a, const StrLit& b) { return a.value == b.value; }
bool node_equal(const BoolLit& a, const BoolLit& b) {
  return a.value == b.value;
}
bool node_equal(const Name& a, const Name& b) { return a.id == b.id; }
bool node_equal(const BinOp& a, const BinOp& b) {
  return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
}
bool node_equal(const UnaryOp& a, const UnaryOp& b) {
  return a.op == b.op && equal(*a.operand, *b.operand);
}
bool node_equal(const MethodCall& a, const MethodCall& b) {
  return a.name == b.name && equal(*a.recv, *b.recv) &&
         equal_exprs(a.args, b.args);
}
bool node_equal(const Call& a, const Call& b) {
  return a.name == b.name && equal_exprs(a.args, b.args);
}
bool node_equal(const ListDisplay& a, const ListDisplay& b) {
  return equal_exprs(a.items, b.items);
}
bool node_equal(const Index& a, const Index& b) {
  return equal(*a.recv, *b.recv) && equal(*a.index, *b.index);
}

bool node_equal(const Assign& a, const Assign& b) {
  return a.name == b.name && equal(*a.value, *b.value);
}
bool node_equal(const If& a, const If& b) {
  if (!equal(*a.cond, *b.cond)) return false;
  if (!equal_blocks(a.then_body, b.then_body)) return false;
  if (a.elifs.size() != b.elifs.size()) return false;
  for (std::size_t i = 0; i < a.elifs.size(); ++i) {
    if (!equal(*a.elifs[i].cond, *b.elifs[i].cond)) return false;
    if (!equal_blocks(a.elifs[i].body, b.elifs[i].body)) return false;
  }
  return equal_blocks(a.else_body, b.else_body);
}
bool node_equal(const For& a, const For& b) {
  return a.var == b.var && equal(*a.iterable, *b.iterable) &&
         equal_blocks(a.body, b.body);
}
bool node_equal(const Return& a, const Return& b) {
  return equal(*a.value, *b.value);
}
bool node_equal(const ExprStmt& a, const ExprStmt& b) {
  return equal(*a.expr, *b.expr);
}

template <typename Variant>
bool variant_equal(const Variant& a, const Variant& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return node_equal(x, std::get<T>(b));
      },
      a);
}

}  // namespace

bool equal(const Expr& a, const Expr& b) { return variant_equal(a.node, b.node); }

bool equal(const Stmt& a, const Stmt& b) { return variant_equal(a.node, b.node); }

bool equal(const Program& a, const Program& b) {
  return equal_blocks(a.statements, b.statements);
}

}  // namespace nept::lang
