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

#include <charconv>
#include <cmath>

#include "nept/lang/printer.hpp"

namespace nept::lang {

namespace {

// Binding strength, loosest to tightest. Postfix and atoms never need
// wrapping; a child is parenthesized when its level is below the context.
enum Level : int {
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kCmp = 4,
  kAdd = 5,
  kMul = 6,
  kNeg = 7,
  kPostfix = 8,
  kAtom = 9,
};

int binop_level(BinOpKind op) {
  switch (op) {
    case BinOpKind::Or: return kOr;
    case BinOpKind::And: return kAnd;
    case BinOpKind::Eq:
    case BinOpKind::Ne:
    case BinOpKind::Lt:
    case BinOpKind::Gt:
    case BinOpKind::Le:
    case BinOpKind::Ge: return kCmp;
    case BinOpKind::Add:
    case BinOpKind::Sub: return kAdd;
    case BinOpKind::Mul:
    case BinOpKind::Div: return kMul;
  }
  return kAtom;
}

const char* binop_text(BinOpKind op) {
  switch (op) {
    case BinOpKind::Or: return "|";
    case BinOpKind::And: return "&";
    case BinOpKind::Eq: return "==";
    case BinOpKind::Ne: return "!=";
    case BinOpKind::Lt: return "<";
    case BinOpKind::Gt: return ">";
    case BinOpKind::Le: return "<=";
    case BinOpKind::Ge: return ">=";
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Div: return "/";
  }
  return "?";
}

int expr_level(const Expr& e) {
  if (const auto* b = std::get_if<BinOp>(&e.node)) return binop_level(b->op);
  if (const auto* u = std::get_if<UnaryOp>(&e.node))
    return u->op == UnOpKind::Not ? kNot : kNeg;
  if (std::holds_alternative<MethodCall>(e.node) ||
      std::holds_alternative<Call>(e.node) ||
      std::holds_alternative<Index>(e.node))
    return kPostfix;
  return kAtom;
}

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_float(double v) {
  if (!std::isfinite(v))
    throw Error("pretty_print: non-finite float literal");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep the token lexable as a float: guarantee a decimal point.
  if (s.find('.') == std::string::npos) {
    const std::size_t e = s.find_first_of("eE");
    if (e == std::string::npos)
      s += ".0";
    else
      s.insert(e, ".0");
  }
  return s;
}

void print_expr(std::string& out, const Expr& e, int min_level);

void print_args(std::string& out, const std::vector<ExprPtr>& args) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    print_expr(out, *args[i], kOr);
  }
  out += ')';
}

void print_expr(std::string& out, const Expr& e, int min_level) {
  const bool wrap = expr_level(e) < min_level;
  if (wrap) out += '(';
  struct Visitor {
    std::string& out;
    void operator()(const IntLit& n) const { out += std::to_string(n.value); }
    void operator()(const FloatLit& n) const { out += format_float(n.value); }
    void operator()(const StrLit& n) const { out += escape(n.value); }
    void operator()(const BoolLit& n) const {
      out += n.value ? "True" : "False";
    }
    void operator()(const Name& n) const { out += n.id; }
    void operator()(const BinOp& n) const {
      const int level = binop_level(n.op);
      print_expr(out, *n.lhs, level);
      out += ' ';
      out += binop_text(n.op);
      out += ' ';
      print_expr(out, *n.rhs, level + 1);
    }
    void operator()(const UnaryOp& n) const {
      if (n.op == UnOpKind::Not) {
        out += "not ";
        print_expr(out, *n.operand, kNot);
      } else {
        out += '-';
        print_expr(out, *n.operand, kNeg);
      }
    }
    void operator()(const MethodCall& n) const {
      print_expr(out, *n.recv, kPostfix);
      out += '.';
      out += n.name;
      print_args(out, n.args);
    }
    void operator()(const Call& n) const {
      out += n.name;
      print_args(out, n.args);
    }
    void operator()(const ListDisplay& n) const {
      out += '[';
      for (std::size_t i = 0; i < n.items.size(); ++i) {
        if (i > 0) out += ", ";
        print_expr(out, *n.items[i], kOr);
      }
      out += ']';
    }
    void operator()(const Index& n) const {
      print_expr(out, *n.recv, kPostfix);
      out += '[';
      print_expr(out, *n.index, kOr);
      out += ']';
    }
  };
  std::visit(Visitor{out}, e.node);
  if (wrap) out += ')';
}

void print_block(std::string& out, const Block& block, int indent);

void print_stmt(std::string& out, const Stmt& stmt, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  struct Visitor {
    std::string& out;
    const std::string& pad;
    int indent;
    void operator()(const Assign& s) const {
      out += pad;
      out += s.name;
      out += " = ";
      print_expr(out, *s.value, kOr);
      out += '\n';
    }
    void operator()(const If& s) const {
      out += pad;
      out += "if ";
      print_expr(out, *s.cond, kOr);
      out += ":\n";
      print_block(out, s.then_body, indent + 1);
      for (const ElifClause& clause : s.elifs) {
        out += pad;
        out += "elif ";
        print_expr(out, *clause.cond, kOr);
        out += ":\n";
        print_block(out, clause.body, indent + 1);
      }
      if (!s.else_body.empty()) {
        out += pad;
        out += "else:\n";
        print_block(out, s.else_body, indent + 1);
      }
    }
    void operator()(const For& s) const {
      out += pad;
      out += "for ";
      out += s.var;
      out += " in ";
      print_expr(out, *s.iterable, kOr);
      out += ":\n";
      print_block(out, s.body, indent + 1);
    }
    void operator()(const Return& s) const {
      out += pad;
      out += "return ";
      print_expr(out, *s.value, kOr);
      out += '\n';
    }
    void operator()(const ExprStmt& s) const {
      out += pad;
      print_expr(out, *s.expr, kOr);
      out += '\n';
    }
  };
  std::visit(Visitor{out, pad, indent}, stmt.node);
}

void print_block(std::string& out, const Block& block, int indent) {
  for (const StmtPtr& s : block) print_stmt(out, *s, indent);
}

}  // namespace

std::string pretty_print(const Program& p) {
  std::string out;
  print_block(out, p.statements, 0);
  return out;
}

}  // namespace nept::lang
