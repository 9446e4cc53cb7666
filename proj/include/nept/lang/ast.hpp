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

#ifndef NEPT_LANG_AST_HPP_
#define NEPT_LANG_AST_HPP_

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nept/lang/token.hpp"

namespace nept::lang {

/// Combined structural nesting limit (expression grouping plus block depth).
inline constexpr int kMaxDepth = 64;

enum class BinOpKind : std::uint8_t {
  Or,
  And,
  Eq,
  Ne,
  Lt,
  Gt,
  Le,
  Ge,
  Add,
  Sub,
  Mul,
  Div,
};

enum class UnOpKind : std::uint8_t { Not, Neg };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// Literal values as lexed; Int and Float literals are nonnegative (a leading
// minus parses as UnaryOp(Neg, ...)).
struct IntLit {
  long long value = 0;
};
struct FloatLit {
  double value = 0.0;
};
struct StrLit {
  std::string value;
};
struct BoolLit {
  bool value = false;
};
struct Name {
  std::string id;
};
struct BinOp {
  BinOpKind op = BinOpKind::Or;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct UnaryOp {
  UnOpKind op = UnOpKind::Not;
  ExprPtr operand;
};
struct MethodCall {
  ExprPtr recv;
  std::string name;  // one of: exists forall count iota implies
  std::vector<ExprPtr> args;
};
struct Call {
  std::string name;  // one of: score query len str int abs
  std::vector<ExprPtr> args;
};
struct ListDisplay {
  std::vector<ExprPtr> items;
};
struct Index {
  ExprPtr recv;
  ExprPtr index;
};

struct Expr {
  std::variant<IntLit, FloatLit, StrLit, BoolLit, Name, BinOp, UnaryOp,
               MethodCall, Call, ListDisplay, Index>
      node;
  Span span;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Assign {
  std::string name;
  ExprPtr value;
};
struct ElifClause {
  ExprPtr cond;
  Block body;
};
struct If {
  ExprPtr cond;
  Block then_body;
  std::vector<ElifClause> elifs;
  Block else_body;  // empty when there is no else branch
};
struct For {
  std::string var;
  ExprPtr iterable;
  Block body;
};
struct Return {
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr expr;
};

struct Stmt {
  std::variant<Assign, If, For, Return, ExprStmt> node;
  Span span;
};

struct Program {
  Block statements;
};

/// The closed method and builtin-call surfaces; the parser enforces
/// membership, the executor enforces arity and operand flavors.
bool is_method_name(const std::string& name);
bool is_builtin_name(const std::string& name);

/// Structural equality; spans are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const Program& a, const Program& b);

}  // namespace nept::lang

#endif  // NEPT_LANG_AST_HPP_
