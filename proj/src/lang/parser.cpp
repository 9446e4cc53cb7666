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

#include "nept/lang/parser.hpp"

namespace nept::lang {

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Ident: return "identifier '" + t.value + "'";
    case TokenKind::Int:
    case TokenKind::Float: return "number '" + t.value + "'";
    case TokenKind::Str: return "string literal";
    case TokenKind::Keyword:
    case TokenKind::Op: return "'" + t.value + "'";
    case TokenKind::Newline: return "end of line";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "end of block";
    case TokenKind::Eof: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Program parse_program() {
    Program p;
    while (!at(TokenKind::Eof)) {
      if (at(TokenKind::Indent)) fail(cur(), "unexpected indent");
      p.statements.push_back(parse_statement());
    }
    return p;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth)
        p_.fail(p_.cur(), "nesting depth exceeds 64");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  const Token& cur() const { return toks_[i_]; }
  const Token& next() const {
    return i_ + 1 < toks_.size() ? toks_[i_ + 1] : toks_.back();
  }
  const Token& prev() const { return toks_[i_ - 1]; }
  void advance() {
    if (i_ + 1 < toks_.size()) ++i_;
  }

  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_op(std::string_view s) const {
    return cur().kind == TokenKind::Op && cur().value == s;
  }
  bool at_kw(std::string_view s) const {
    return cur().kind == TokenKind::Keyword && cur().value == s;
  }
  bool eat_op(std::string_view s) {
    if (!at_op(s)) return false;
    advance();
    return true;
  }
  bool eat_kw(std::string_view s) {
    if (!at_kw(s)) return false;
    advance();
    return true;
  }
  void expect_op(std::string_view s, const std::string& what) {
    if (!eat_op(s)) fail(cur(), "expected " + what);
  }
  void expect_newline() {
    if (!at(TokenKind::Newline))
      fail(cur(), "expected end of line after statement");
    advance();
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.col, t.span, msg + ", got " + describe(t));
  }

  [[noreturn]] void fail_raw(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.col, t.span, msg);
  }

  StmtPtr make_stmt(std::size_t from,
                    std::variant<Assign, If, For, Return, ExprStmt> node) {
    auto s = std::make_unique<Stmt>();
    s->node = std::move(node);
    s->span = {toks_[from].span.begin, prev().span.end};
    return s;
  }

  ExprPtr make_expr(
      std::size_t from,
      std::variant<IntLit, FloatLit, StrLit, BoolLit, Name, BinOp, UnaryOp,
                   MethodCall, Call, ListDisplay, Index>
          node) {
    auto e = std::make_unique<Expr>();
    e->node = std::move(node);
    e->span = {toks_[from].span.begin, prev().span.end};
    return e;
  }

  StmtPtr parse_statement() {
    const std::size_t from = i_;
    if (at_kw("if")) return parse_if(from);
    if (at_kw("for")) return parse_for(from);
    if (at_kw("elif") || at_kw("else"))
      fail_raw(cur(), "'" + cur().value + "' without a matching 'if'");
    if (eat_kw("return")) {
      ExprPtr value = parse_expr();
      expect_newline();
      return make_stmt(from, Return{std::move(value)});
    }
    if (at(TokenKind::Ident) && next().kind == TokenKind::Op &&
        next().value == "=") {
      std::string name = cur().value;
      advance();
      advance();
      ExprPtr value = parse_expr();
      expect_newline();
      return make_stmt(from, Assign{std::move(name), std::move(value)});
    }
    ExprPtr e = parse_expr();
    expect_newline();
    return make_stmt(from, ExprStmt{std::move(e)});
  }

  StmtPtr parse_if(std::size_t from) {
    advance();  // if
    If node;
    node.cond = parse_expr();
    expect_op(":", "':' after condition");
    node.then_body = parse_block();
    while (at_kw("elif")) {
      advance();
      ElifClause clause;
      clause.cond = parse_expr();
      expect_op(":", "':' after condition");
      clause.body = parse_block();
      node.elifs.push_back(std::move(clause));
    }
    if (eat_kw("else")) {
      expect_op(":", "':' after 'else'");
      node.else_body = parse_block();
    }
    return make_stmt(from, std::move(node));
  }

  StmtPtr parse_for(std::size_t from) {
    advance();  // for
    if (!at(TokenKind::Ident))
      fail(cur(), "expected loop variable name");
    std::string var = cur().value;
    advance();
    if (!eat_kw("in")) fail(cur(), "expected 'in'");
    For node;
    node.var = std::move(var);
    node.iterable = parse_expr();
    expect_op(":", "':' after loop header");
    node.body = parse_block();
    return make_stmt(from, std::move(node));
  }

  Block parse_block() {
    DepthGuard guard(*this);
    if (!at(TokenKind::Newline))
      fail(cur(), "expected end of line after ':'");
    advance();
    if (!at(TokenKind::Indent)) fail(cur(), "expected indented block");
    advance();
    Block block;
    while (!at(TokenKind::Dedent)) {
      if (at(TokenKind::Eof)) fail(cur(), "expected statement");
      block.push_back(parse_statement());
    }
    advance();  // dedent
    return block;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    DepthGuard guard(*this);
    const std::size_t from = i_;
    ExprPtr lhs = parse_and();
    while (at_op("|") || at_kw("or")) {
      advance();
      ExprPtr rhs = parse_and();
      lhs = make_expr(from, BinOp{BinOpKind::Or, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_and() {
    const std::size_t from = i_;
    ExprPtr lhs = parse_not();
    while (at_op("&") || at_kw("and")) {
      advance();
      ExprPtr rhs = parse_not();
      lhs = make_expr(from, BinOp{BinOpKind::And, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_not() {
    const std::size_t from = i_;
    int nots = 0;
    while (eat_kw("not")) ++nots;
    ExprPtr e = parse_comparison();
    for (int k = 0; k < nots; ++k)
      e = make_expr(from, UnaryOp{UnOpKind::Not, std::move(e)});
    return e;
  }

  bool at_comparison_op() const {
    return at_op("==") || at_op("!=") || at_op("<") || at_op(">") ||
           at_op("<=") || at_op(">=");
  }

  ExprPtr parse_comparison() {
    const std::size_t from = i_;
    ExprPtr lhs = parse_additive();
    if (!at_comparison_op()) return lhs;
    BinOpKind op;
    if (at_op("==")) op = BinOpKind::Eq;
    else if (at_op("!=")) op = BinOpKind::Ne;
    else if (at_op("<=")) op = BinOpKind::Le;
    else if (at_op(">=")) op = BinOpKind::Ge;
    else if (at_op("<")) op = BinOpKind::Lt;
    else op = BinOpKind::Gt;
    advance();
    ExprPtr rhs = parse_additive();
    if (at_comparison_op())
      fail_raw(cur(), "comparison chaining is not allowed");
    return make_expr(from, BinOp{op, std::move(lhs), std::move(rhs)});
  }

  ExprPtr parse_additive() {
    const std::size_t from = i_;
    ExprPtr lhs = parse_multiplicative();
    while (at_op("+") || at_op("-")) {
      const BinOpKind op = at_op("+") ? BinOpKind::Add : BinOpKind::Sub;
      advance();
      ExprPtr rhs = parse_multiplicative();
      lhs = make_expr(from, BinOp{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    const std::size_t from = i_;
    ExprPtr lhs = parse_unary();
    while (at_op("*") || at_op("/")) {
      const BinOpKind op = at_op("*") ? BinOpKind::Mul : BinOpKind::Div;
      advance();
      ExprPtr rhs = parse_unary();
      lhs = make_expr(from, BinOp{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    const std::size_t from = i_;
    int negs = 0;
    while (eat_op("-")) ++negs;
    ExprPtr e = parse_postfix();
    for (int k = 0; k < negs; ++k)
      e = make_expr(from, UnaryOp{UnOpKind::Neg, std::move(e)});
    return e;
  }

  ExprPtr parse_postfix() {
    const std::size_t from = i_;
    ExprPtr e = parse_primary();
    while (true) {
      if (eat_op(".")) {
        if (!at(TokenKind::Ident))
          fail(cur(), "expected method name after '.'");
        const Token& name_tok = cur();
        std::string name = name_tok.value;
        advance();
        if (!is_method_name(name))
          fail(name_tok, "unknown method '" + name + "'");
        expect_op("(", "'(' after method name");
        std::vector<ExprPtr> args = parse_args();
        MethodCall call;
        call.recv = std::move(e);
        call.name = std::move(name);
        call.args = std::move(args);
        e = make_expr(from, std::move(call));
      } else if (eat_op("[")) {
        ExprPtr index = parse_expr();
        expect_op("]", "']' after index");
        e = make_expr(from, Index{std::move(e), std::move(index)});
      } else {
        return e;
      }
    }
  }

  std::vector<ExprPtr> parse_args() {
    std::vector<ExprPtr> args;
    if (eat_op(")")) return args;
    args.push_back(parse_expr());
    while (eat_op(",")) args.push_back(parse_expr());
    expect_op(")", "')' after arguments");
    return args;
  }

  ExprPtr parse_primary() {
    const std::size_t from = i_;
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::Int: {
        long long v = 0;
        std::from_chars(t.value.data(), t.value.data() + t.value.size(), v);
        advance();
        return make_expr(from, IntLit{v});
      }
      case TokenKind::Float: {
        double v = 0.0;
        std::from_chars(t.value.data(), t.value.data() + t.value.size(), v);
        advance();
        return make_expr(from, FloatLit{v});
      }
      case TokenKind::Str: {
        std::string v = t.value;
        advance();
        return make_expr(from, StrLit{std::move(v)});
      }
      case TokenKind::Keyword:
        if (t.value == "True" || t.value == "False") {
          const bool v = t.value == "True";
          advance();
          return make_expr(from, BoolLit{v});
        }
        fail(t, "expected expression");
      case TokenKind::Ident: {
        std::string name = t.value;
        if (next().kind == TokenKind::Op && next().value == "(") {
          if (!is_builtin_name(name))
            fail(t, "unknown function '" + name + "'");
          advance();
          advance();
          std::vector<ExprPtr> args = parse_args();
          Call call;
          call.name = std::move(name);
          call.args = std::move(args);
          return make_expr(from, std::move(call));
        }
        advance();
        return make_expr(from, Name{std::move(name)});
      }
      case TokenKind::Op:
        if (t.value == "(") {
          advance();
          ExprPtr e = parse_expr();
          expect_op(")", "')'");
          e->span = {toks_[from].span.begin, prev().span.end};
          return e;
        }
        if (t.value == "[") {
          advance();
          ListDisplay list;
          if (!eat_op("]")) {
            list.items.push_back(parse_expr());
            while (eat_op(",")) list.items.push_back(parse_expr());
            expect_op("]", "']' after list items");
          }
          return make_expr(from, std::move(list));
        }
        fail(t, "expected expression");
      default:
        fail(t, "expected expression");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

}  // namespace

Program parse(const std::vector<Token>& tokens) {
  if (tokens.empty() || tokens.back().kind != TokenKind::Eof)
    throw ParseError(1, 1, {0, 0}, "token stream must end with Eof");
  return Parser(tokens).parse_program();
}

Program parse(const std::string& source) { return parse(tokenize(source)); }

}  // namespace nept::lang
