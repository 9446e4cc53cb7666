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

#include "nept/exec/executor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nept/soft/ops.hpp"
#include "nept/soft/tape.hpp"

namespace nept::exec {

namespace {

using lang::Expr;
using lang::Span;
using lang::Stmt;
using soft::SoftValue;

struct Value;
using ValueList = std::vector<Value>;

/// Runtime value: a soft tensor (a soft count when flagged), text, integer,
/// real, boolean, or a flavor-homogeneous list.
struct Value {
  std::variant<SoftValue, std::string, long long, double, bool, ValueList> v;
};

enum class Flavor { Soft, SoftCount, Text, Integer, Real, Boolean, List };

Flavor flavor(const Value& val) {
  switch (val.v.index()) {
    case 0:
      return std::get<SoftValue>(val.v).is_count() ? Flavor::SoftCount
                                                   : Flavor::Soft;
    case 1:
      return Flavor::Text;
    case 2:
      return Flavor::Integer;
    case 3:
      return Flavor::Real;
    case 4:
      return Flavor::Boolean;
    default:
      return Flavor::List;
  }
}

std::string describe(const Value& val) {
  switch (flavor(val)) {
    case Flavor::Soft: {
      const SoftValue& s = std::get<SoftValue>(val.v);
      if (s.is_vector()) return "soft vector";
      if (s.is_matrix()) return "soft matrix";
      return "soft scalar";
    }
    case Flavor::SoftCount:
      return "soft count";
    case Flavor::Text:
      return "text";
    case Flavor::Integer:
      return "integer";
    case Flavor::Real:
      return "real";
    case Flavor::Boolean:
      return "boolean";
    default:
      return "list";
  }
}

const char* binop_text(lang::BinOpKind op) {
  switch (op) {
    case lang::BinOpKind::Or: return "or";
    case lang::BinOpKind::And: return "and";
    case lang::BinOpKind::Eq: return "==";
    case lang::BinOpKind::Ne: return "!=";
    case lang::BinOpKind::Lt: return "<";
    case lang::BinOpKind::Gt: return ">";
    case lang::BinOpKind::Le: return "<=";
    case lang::BinOpKind::Ge: return ">=";
    case lang::BinOpKind::Add: return "+";
    case lang::BinOpKind::Sub: return "-";
    case lang::BinOpKind::Mul: return "*";
    case lang::BinOpKind::Div: return "/";
  }
  return "?";
}

bool is_number(Flavor f) {
  return f == Flavor::Integer || f == Flavor::Real;
}

double number_of(const Value& val) {
  if (flavor(val) == Flavor::Integer)
    return static_cast<double>(std::get<long long>(val.v));
  return std::get<double>(val.v);
}

long long round_half_up(double x) {
  return static_cast<long long>(std::floor(x + 0.5));
}

std::string format_real(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf) - 4, v);
  std::string out(buf, end);
  if (out.find('.') == std::string::npos &&
      out.find('e') == std::string::npos &&
      out.find("inf") == std::string::npos &&
      out.find("nan") == std::string::npos)
    out += ".0";
  return out;
}

struct ReturnSignal {
  Value value;
};

class Interpreter {
 public:
  Interpreter(const lang::Program& program, ground::Grounder& grounder,
              const ExecOptions& opts)
      : program_(program), grounder_(grounder), opts_(opts) {
    opts_.smoothing.validate();
    if (opts_.step_budget < 1 || opts_.call_budget < 1)
      throw ConfigError("budgets must be positive");
  }

  Outcome run_program() {
    Outcome out;
    if (grounder_.num_objects() == 0) {
      out.answer.kind = Answer::Kind::NoObjects;
      return out;
    }
    try {
      exec_block(program_.statements);
    } catch (ReturnSignal& ret) {
      finalize(ret.value, out);
      out.trace = std::move(trace_);
      if (opts_.gradients && final_soft_.has_value()) attach_gradients(out);
      return out;
    }
    throw ExecError("program finished without a return statement");
  }

 private:
  // ---- statements ----

  void exec_block(const lang::Block& block) {
    for (const auto& stmt : block) exec_stmt(*stmt);
  }

  void exec_stmt(const Stmt& stmt) {
    step(stmt.span);
    if (const auto* a = std::get_if<lang::Assign>(&stmt.node)) {
      Value val = eval(*a->value);
      env_.insert_or_assign(a->name, std::move(val));
    } else if (const auto* i = std::get_if<lang::If>(&stmt.node)) {
      if (truthy(eval(*i->cond), i->cond->span)) {
        exec_block(i->then_body);
        return;
      }
      for (const lang::ElifClause& clause : i->elifs) {
        if (truthy(eval(*clause.cond), clause.cond->span)) {
          exec_block(clause.body);
          return;
        }
      }
      exec_block(i->else_body);
    } else if (const auto* f = std::get_if<lang::For>(&stmt.node)) {
      Value iterable = eval(*f->iterable);
      for (Value& item : iterate(iterable, f->iterable->span)) {
        env_.insert_or_assign(f->var, std::move(item));
        exec_block(f->body);
      }
    } else if (const auto* r = std::get_if<lang::Return>(&stmt.node)) {
      throw ReturnSignal{eval(*r->value)};
    } else {
      (void)eval(*std::get<lang::ExprStmt>(stmt.node).expr);
    }
  }

  std::vector<Value> iterate(const Value& val, const Span& span) {
    if (const auto* list = std::get_if<ValueList>(&val.v)) return *list;
    if (flavor(val) == Flavor::Soft) {
      const SoftValue& s = std::get<SoftValue>(val.v);
      if (s.is_vector()) {
        std::vector<Value> items;
        for (int i = 0; i < s.dim(); ++i) {
          SoftValue elem = guarded(span, [&] { return soft::extract(tape_, s,
                                                                    i); });
          ValueList pair;
          pair.push_back(Value{static_cast<long long>(i)});
          pair.push_back(Value{std::move(elem)});
          items.push_back(Value{std::move(pair)});
        }
        return items;
      }
    }
    fail(span, "cannot iterate a " + describe(val) +
                   "; loops need a list or a soft vector");
  }

  bool truthy(const Value& val, const Span& span) {
    switch (flavor(val)) {
      case Flavor::Boolean:
        return std::get<bool>(val.v);
      case Flavor::Text:
        return !std::get<std::string>(val.v).empty();
      case Flavor::Integer:
        return static_cast<double>(std::get<long long>(val.v)) > 0.5;
      case Flavor::SoftCount:
        return std::get<SoftValue>(val.v).as_scalar() > 0.5;
      case Flavor::Soft: {
        const SoftValue& s = std::get<SoftValue>(val.v);
        if (!s.is_scalar())
          fail(span, "cannot branch on a " + describe(val) +
                         "; reduce it to a scalar first");
        return s.as_scalar() >= 0.5;
      }
      default:
        fail(span, "cannot branch on a " + describe(val));
    }
  }

  // ---- expressions ----

  Value eval(const Expr& expr) {
    step(expr.span);
    if (const auto* lit = std::get_if<lang::IntLit>(&expr.node))
      return Value{lit->value};
    if (const auto* lit = std::get_if<lang::FloatLit>(&expr.node))
      return Value{lit->value};
    if (const auto* lit = std::get_if<lang::StrLit>(&expr.node))
      return Value{lit->value};
    if (const auto* lit = std::get_if<lang::BoolLit>(&expr.node))
      return Value{lit->value};
    if (const auto* name = std::get_if<lang::Name>(&expr.node)) {
      auto it = env_.find(name->id);
      if (it == env_.end()) fail(expr.span, "unbound name '" + name->id + "'");
      return it->second;
    }
    if (const auto* list = std::get_if<lang::ListDisplay>(&expr.node)) {
      ValueList items;
      for (const lang::ExprPtr& item : list->items)
        items.push_back(eval(*item));
      for (std::size_t i = 1; i < items.size(); ++i) {
        if (flavor(items[i]) != flavor(items[0]))
          fail(expr.span, "list elements must share one flavor (" +
                              describe(items[0]) + " vs " +
                              describe(items[i]) + ")");
      }
      return Value{std::move(items)};
    }
    if (const auto* unary = std::get_if<lang::UnaryOp>(&expr.node))
      return eval_unary(*unary, expr.span);
    if (const auto* binop = std::get_if<lang::BinOp>(&expr.node))
      return eval_binop(*binop, expr.span);
    if (const auto* method = std::get_if<lang::MethodCall>(&expr.node))
      return eval_method(*method, expr.span);
    if (const auto* call = std::get_if<lang::Call>(&expr.node))
      return eval_call(*call, expr.span);
    return eval_index(std::get<lang::Index>(expr.node), expr.span);
  }

  Value eval_unary(const lang::UnaryOp& unary, const Span& span) {
    Value operand = eval(*unary.operand);
    if (unary.op == lang::UnOpKind::Neg) {
      if (flavor(operand) == Flavor::Integer)
        return Value{-std::get<long long>(operand.v)};
      if (flavor(operand) == Flavor::Real)
        return Value{-std::get<double>(operand.v)};
      fail(span, "unary minus undefined for a " + describe(operand));
    }
    if (flavor(operand) == Flavor::Boolean)
      return Value{!std::get<bool>(operand.v)};
    if (flavor(operand) == Flavor::Soft) {
      SoftValue out = guarded(span, [&] {
        return soft::connective(tape_, soft::Connective::Not,
                                std::get<SoftValue>(operand.v));
      });
      return Value{std::move(out)};
    }
    fail(span, "operator 'not' undefined for a " + describe(operand));
  }

  Value eval_binop(const lang::BinOp& binop, const Span& span) {
    Value lhs = eval(*binop.lhs);
    Value rhs = eval(*binop.rhs);
    switch (binop.op) {
      case lang::BinOpKind::And:
      case lang::BinOpKind::Or:
        return eval_connective(binop.op, lhs, rhs, span);
      case lang::BinOpKind::Eq:
      case lang::BinOpKind::Ne:
      case lang::BinOpKind::Lt:
      case lang::BinOpKind::Gt:
      case lang::BinOpKind::Le:
      case lang::BinOpKind::Ge:
        return eval_comparison(binop.op, lhs, rhs, span);
      default:
        return eval_arith(binop.op, lhs, rhs, span);
    }
  }

  Value eval_connective(lang::BinOpKind op, const Value& lhs, const Value& rhs,
                        const Span& span) {
    const Flavor f1 = flavor(lhs);
    const Flavor f2 = flavor(rhs);
    if (f1 == Flavor::Boolean && f2 == Flavor::Boolean) {
      const bool a = std::get<bool>(lhs.v);
      const bool b = std::get<bool>(rhs.v);
      return Value{op == lang::BinOpKind::And ? (a && b) : (a || b)};
    }
    const std::optional<SoftValue> a = connective_operand(lhs, span);
    const std::optional<SoftValue> b = connective_operand(rhs, span);
    if (!a || !b)
      fail(span, std::string("operator '") + binop_text(op) +
                     "' undefined for " + describe(lhs) + " and " +
                     describe(rhs));
    if (op == lang::BinOpKind::And && a->is_vector() && b->is_matrix()) {
      SoftValue out = guarded(
          span, [&] { return soft::relate(tape_, *a, *b,
                                          opts_.relate_literal); });
      return Value{std::move(out)};
    }
    const soft::Connective kind = op == lang::BinOpKind::And
                                      ? soft::Connective::And
                                      : soft::Connective::Or;
    SoftValue out =
        guarded(span, [&] { return soft::connective(tape_, kind, *a, *b); });
    return Value{std::move(out)};
  }

  Value eval_comparison(lang::BinOpKind op, const Value& lhs, const Value& rhs,
                        const Span& span) {
    const Flavor f1 = flavor(lhs);
    const Flavor f2 = flavor(rhs);
    if (f1 == Flavor::Text && f2 == Flavor::Text) {
      if (op != lang::BinOpKind::Eq && op != lang::BinOpKind::Ne)
        fail(span, std::string("operator '") + binop_text(op) +
                       "' undefined for text");
      const bool eq =
          std::get<std::string>(lhs.v) == std::get<std::string>(rhs.v);
      return Value{op == lang::BinOpKind::Eq ? eq : !eq};
    }
    if (f1 == Flavor::Boolean && f2 == Flavor::Boolean) {
      if (op != lang::BinOpKind::Eq && op != lang::BinOpKind::Ne)
        fail(span, std::string("operator '") + binop_text(op) +
                       "' undefined for booleans");
      const bool eq = std::get<bool>(lhs.v) == std::get<bool>(rhs.v);
      return Value{op == lang::BinOpKind::Eq ? eq : !eq};
    }
    if (is_number(f1) && is_number(f2)) {
      const double a = number_of(lhs);
      const double b = number_of(rhs);
      switch (op) {
        case lang::BinOpKind::Eq: return Value{a == b};
        case lang::BinOpKind::Ne: return Value{a != b};
        case lang::BinOpKind::Lt: return Value{a < b};
        case lang::BinOpKind::Gt: return Value{a > b};
        case lang::BinOpKind::Le: return Value{a <= b};
        default: return Value{a >= b};
      }
    }
    const std::optional<SoftValue> a = compare_operand(lhs, span);
    const std::optional<SoftValue> b = compare_operand(rhs, span);
    if (!a || !b)
      fail(span, std::string("operator '") + binop_text(op) +
                     "' undefined for " + describe(lhs) + " and " +
                     describe(rhs));
    return Value{soft_comparison(op, *a, *b, span)};
  }

  SoftValue soft_comparison(lang::BinOpKind op, const SoftValue& a,
                            const SoftValue& b, const Span& span) {
    const auto cmp = [&](soft::Compare kind, const SoftValue& s1,
                         const SoftValue& s2) {
      return guarded(span, [&] {
        return soft::soft_compare(tape_, kind, s1, s2, opts_.smoothing);
      });
    };
    const auto negate = [&](const SoftValue& s) {
      return guarded(span, [&] {
        return soft::connective(tape_, soft::Connective::Not, s);
      });
    };
    switch (op) {
      case lang::BinOpKind::Eq:
        return cmp(soft::Compare::Eq, a, b);
      case lang::BinOpKind::Ne:
        return negate(cmp(soft::Compare::Eq, a, b));
      case lang::BinOpKind::Gt:
        return cmp(soft::Compare::Gt, a, b);
      case lang::BinOpKind::Lt:
        return cmp(soft::Compare::Gt, b, a);
      case lang::BinOpKind::Ge:
        return negate(cmp(soft::Compare::Gt, b, a));
      default:  // Le
        return negate(cmp(soft::Compare::Gt, a, b));
    }
  }

  Value eval_arith(lang::BinOpKind op, const Value& lhs, const Value& rhs,
                   const Span& span) {
    const Flavor f1 = flavor(lhs);
    const Flavor f2 = flavor(rhs);
    if (f1 == Flavor::Integer && f2 == Flavor::Integer &&
        op != lang::BinOpKind::Div) {
      const long long a = std::get<long long>(lhs.v);
      const long long b = std::get<long long>(rhs.v);
      switch (op) {
        case lang::BinOpKind::Add: return Value{a + b};
        case lang::BinOpKind::Sub: return Value{a - b};
        default: return Value{a * b};
      }
    }
    if (is_number(f1) && is_number(f2)) {
      const double a = number_of(lhs);
      const double b = number_of(rhs);
      if (op == lang::BinOpKind::Div && b == 0.0)
        fail(span, "division by zero");
      switch (op) {
        case lang::BinOpKind::Add: return Value{a + b};
        case lang::BinOpKind::Sub: return Value{a - b};
        case lang::BinOpKind::Mul: return Value{a * b};
        default: return Value{a / b};
      }
    }
    if (f1 == Flavor::SoftCount || f2 == Flavor::SoftCount) {
      const std::optional<SoftValue> a = count_operand(lhs, span);
      const std::optional<SoftValue> b = count_operand(rhs, span);
      if (a && b) {
        soft::Arith kind = soft::Arith::Add;
        if (op == lang::BinOpKind::Sub) kind = soft::Arith::Sub;
        else if (op == lang::BinOpKind::Mul) kind = soft::Arith::Mul;
        else if (op == lang::BinOpKind::Div) kind = soft::Arith::Div;
        SoftValue out =
            guarded(span, [&] { return soft::arith(tape_, kind, *a, *b); });
        return Value{std::move(out)};
      }
    }
    fail(span, std::string("operator '") + binop_text(op) +
                   "' is defined on numbers and soft counts, got " +
                   describe(lhs) + " and " + describe(rhs));
  }

  Value eval_method(const lang::MethodCall& method, const Span& span) {
    Value recv = eval(*method.recv);
    if (method.name == "implies") {
      if (method.args.size() != 1)
        fail(span, "method 'implies' takes 1 argument, got " +
                       std::to_string(method.args.size()));
      Value arg = eval(*method.args[0]);
      const std::optional<SoftValue> a = connective_operand(recv, span);
      const std::optional<SoftValue> b = connective_operand(arg, span);
      if (!a || !b)
        fail(span, "method 'implies' is defined on soft values, got " +
                       describe(recv) + " and " + describe(arg));
      SoftValue out = guarded(span, [&] {
        return soft::connective(tape_, soft::Connective::Implies, *a, *b);
      });
      return Value{std::move(out)};
    }
    if (!method.args.empty())
      fail(span, "method '" + method.name + "' takes no arguments, got " +
                     std::to_string(method.args.size()));
    if (flavor(recv) != Flavor::Soft ||
        !std::get<SoftValue>(recv.v).is_vector())
      fail(span, "method '" + method.name + "' requires a soft vector, got " +
                     describe(recv));
    soft::Quantifier kind = soft::Quantifier::Exists;
    if (method.name == "forall") kind = soft::Quantifier::Forall;
    else if (method.name == "count") kind = soft::Quantifier::Count;
    else if (method.name == "iota") kind = soft::Quantifier::Iota;
    SoftValue out = guarded(span, [&] {
      return soft::quantify(tape_, kind, std::get<SoftValue>(recv.v));
    });
    return Value{std::move(out)};
  }

  Value eval_call(const lang::Call& call, const Span& span) {
    std::vector<Value> args;
    for (const lang::ExprPtr& arg : call.args) args.push_back(eval(*arg));
    if (call.name == "score") return builtin_score(args, span);
    if (call.name == "query") return builtin_query(args, span);
    if (call.name == "len") return builtin_len(args, span);
    if (call.name == "str") return builtin_str(args, span);
    if (call.name == "int") return builtin_int(args, span);
    return builtin_abs(args, span);
  }

  Value builtin_score(std::vector<Value>& args, const Span& span) {
    if (args.size() != 2)
      fail(span, "score() takes 2 arguments, got " +
                     std::to_string(args.size()));
    if (flavor(args[0]) != Flavor::Text)
      fail(span, "score() question must be a string, got " +
                     describe(args[0]));
    if (flavor(args[1]) != Flavor::Integer)
      fail(span, "score() num_objects must be an integer, got " +
                     describe(args[1]));
    const std::string& question = std::get<std::string>(args[0].v);
    const long long arity = std::get<long long>(args[1].v);
    if (arity < 0 || arity > 2)
      fail(span, "score() num_objects must be 0, 1, or 2, got " +
                     std::to_string(arity));
    charge_call(span);
    const std::vector<double> scores =
        grounder_.score(question, static_cast<int>(arity));
    const std::size_t n = grounder_.num_objects();
    SoftValue leaf = guarded(span, [&]() -> SoftValue {
      if (arity == 0) {
        if (scores.size() != 1)
          throw SoftError("grounder returned " +
                          std::to_string(scores.size()) +
                          " scores for num_objects=0");
        return tape_.leaf(SoftValue::scalar(scores[0]));
      }
      if (arity == 1) {
        if (scores.size() != n)
          throw SoftError("grounder returned " +
                          std::to_string(scores.size()) + " scores for " +
                          std::to_string(n) + " objects");
        return tape_.leaf(SoftValue::vector(scores));
      }
      if (scores.size() != n * n)
        throw SoftError("grounder returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(n * n) +
                        " ordered pairs");
      return tape_.leaf(SoftValue::matrix(static_cast<int>(n), scores));
    });
    TraceEntry entry;
    entry.kind = "score";
    entry.question = question;
    entry.num_objects = static_cast<int>(arity);
    entry.shape = arity == 0 ? "scalar"
                  : arity == 1
                      ? "vector(" + std::to_string(n) + ")"
                      : "matrix(" + std::to_string(n) + ")";
    trace_.push_back(std::move(entry));
    score_nodes_.push_back(leaf.node());
    return Value{std::move(leaf)};
  }

  Value builtin_query(std::vector<Value>& args, const Span& span) {
    if (args.size() != 2)
      fail(span, "query() takes 2 arguments, got " +
                     std::to_string(args.size()));
    if (flavor(args[0]) != Flavor::Text)
      fail(span, "query() question must be a string, got " +
                     describe(args[0]));
    if (flavor(args[1]) != Flavor::Integer)
      fail(span, "query() object id must be an integer, got " +
                     describe(args[1]));
    const std::string& question = std::get<std::string>(args[0].v);
    const long long id = std::get<long long>(args[1].v);
    charge_call(span);
    std::string text = grounder_.query(question, static_cast<int>(id));
    TraceEntry entry;
    entry.kind = "query";
    entry.question = question;
    entry.object_id = static_cast<int>(id);
    entry.shape = "text";
    trace_.push_back(std::move(entry));
    score_nodes_.push_back(soft::kNoNode);
    return Value{std::move(text)};
  }

  Value builtin_len(std::vector<Value>& args, const Span& span) {
    if (args.size() != 1)
      fail(span,
           "len() takes 1 argument, got " + std::to_string(args.size()));
    const Value& v = args[0];
    if (const auto* list = std::get_if<ValueList>(&v.v)) {
      const bool all_text =
          !list->empty() &&
          std::all_of(list->begin(), list->end(), [](const Value& e) {
            return flavor(e) == Flavor::Text;
          });
      if (all_text) {
        std::set<std::string> distinct;
        for (const Value& e : *list)
          distinct.insert(std::get<std::string>(e.v));
        return Value{static_cast<long long>(distinct.size())};
      }
      return Value{static_cast<long long>(list->size())};
    }
    if (flavor(v) == Flavor::Text)
      return Value{
          static_cast<long long>(std::get<std::string>(v.v).size())};
    if (flavor(v) == Flavor::Soft && std::get<SoftValue>(v.v).is_vector())
      return Value{static_cast<long long>(std::get<SoftValue>(v.v).dim())};
    fail(span, "len() is defined on lists, text, and soft vectors, got " +
                   describe(v));
  }

  Value builtin_str(std::vector<Value>& args, const Span& span) {
    if (args.size() != 1)
      fail(span,
           "str() takes 1 argument, got " + std::to_string(args.size()));
    const Value& v = args[0];
    switch (flavor(v)) {
      case Flavor::Text:
        return v;
      case Flavor::Integer:
        return Value{std::to_string(std::get<long long>(v.v))};
      case Flavor::Real:
        return Value{format_real(std::get<double>(v.v))};
      case Flavor::Boolean:
        return Value{std::string(std::get<bool>(v.v) ? "True" : "False")};
      default:
        fail(span, "str() undefined for a " + describe(v));
    }
  }

  Value builtin_int(std::vector<Value>& args, const Span& span) {
    if (args.size() != 1)
      fail(span,
           "int() takes 1 argument, got " + std::to_string(args.size()));
    const Value& v = args[0];
    switch (flavor(v)) {
      case Flavor::Integer:
        return v;
      case Flavor::Boolean:
        return Value{static_cast<long long>(std::get<bool>(v.v) ? 1 : 0)};
      case Flavor::Real: {
        const double d = std::trunc(std::get<double>(v.v));
        if (!(d >= -9.2e18 && d <= 9.2e18))
          fail(span, "int() argument out of integer range");
        return Value{static_cast<long long>(d)};
      }
      case Flavor::Text: {
        const std::string& s = std::get<std::string>(v.v);
        long long parsed = 0;
        const auto [ptr, ec] =
            std::from_chars(s.data(), s.data() + s.size(), parsed);
        if (ec != std::errc() || ptr != s.data() + s.size())
          fail(span, "int() cannot parse '" + s + "'");
        return Value{parsed};
      }
      default:
        fail(span, "int() undefined for a " + describe(v) +
                       "; soft scores are finalized, not truncated");
    }
  }

  Value builtin_abs(std::vector<Value>& args, const Span& span) {
    if (args.size() != 1)
      fail(span,
           "abs() takes 1 argument, got " + std::to_string(args.size()));
    const Value& v = args[0];
    if (flavor(v) == Flavor::Integer) {
      const long long i = std::get<long long>(v.v);
      return Value{i < 0 ? -i : i};
    }
    if (flavor(v) == Flavor::Real)
      return Value{std::fabs(std::get<double>(v.v))};
    if (flavor(v) == Flavor::SoftCount || (flavor(v) == Flavor::Soft &&
                                           std::get<SoftValue>(v.v)
                                               .is_scalar())) {
      SoftValue out = guarded(span, [&] {
        return soft::abs_value(tape_, std::get<SoftValue>(v.v));
      });
      return Value{std::move(out)};
    }
    fail(span, "abs() is defined on numbers and soft scalars, got " +
                   describe(v));
  }

  Value eval_index(const lang::Index& index, const Span& span) {
    Value recv = eval(*index.recv);
    Value idx_val = eval(*index.index);
    if (flavor(idx_val) != Flavor::Integer)
      fail(span, "index must be an integer, got " + describe(idx_val));
    const long long idx = std::get<long long>(idx_val.v);
    if (const auto* list = std::get_if<ValueList>(&recv.v)) {
      if (idx < 0 || idx >= static_cast<long long>(list->size()))
        fail(span, "index " + std::to_string(idx) +
                       " out of range for a list of " +
                       std::to_string(list->size()));
      return (*list)[static_cast<std::size_t>(idx)];
    }
    if (flavor(recv) == Flavor::Soft) {
      const SoftValue& s = std::get<SoftValue>(recv.v);
      if (idx < 0 || idx >= s.dim())
        fail(span, "index " + std::to_string(idx) +
                       " out of range for dimension " +
                       std::to_string(s.dim()));
      if (s.is_vector()) {
        SoftValue out = guarded(span, [&] {
          return soft::extract(tape_, s, static_cast<int>(idx));
        });
        return Value{std::move(out)};
      }
      if (s.is_matrix()) {
        SoftValue out = guarded(span, [&] {
          return soft::extract_row(tape_, s, static_cast<int>(idx));
        });
        return Value{std::move(out)};
      }
    }
    fail(span, "cannot index a " + describe(recv));
  }

  // ---- operand promotion ----

  std::optional<SoftValue> connective_operand(const Value& v,
                                              const Span& span) {
    if (flavor(v) == Flavor::Soft) return std::get<SoftValue>(v.v);
    if (is_number(flavor(v))) {
      return guarded(span, [&] {
        return tape_.leaf(SoftValue::scalar(number_of(v)));
      });
    }
    return std::nullopt;
  }

  std::optional<SoftValue> compare_operand(const Value& v, const Span& span) {
    if (flavor(v) == Flavor::Soft || flavor(v) == Flavor::SoftCount) {
      const SoftValue& s = std::get<SoftValue>(v.v);
      if (!s.is_scalar())
        fail(span, "comparisons need scalars; reduce the " + describe(v) +
                       " first");
      return s;
    }
    if (is_number(flavor(v))) {
      return guarded(span, [&] {
        return tape_.leaf(SoftValue::count(number_of(v)));
      });
    }
    return std::nullopt;
  }

  std::optional<SoftValue> count_operand(const Value& v, const Span& span) {
    if (flavor(v) == Flavor::SoftCount) return std::get<SoftValue>(v.v);
    if (is_number(flavor(v))) {
      return guarded(span, [&] {
        return tape_.leaf(SoftValue::count(number_of(v)));
      });
    }
    return std::nullopt;
  }

  // ---- finalization ----

  void finalize(const Value& v, Outcome& out) {
    Answer& ans = out.answer;
    if (opts_.task == ExecOptions::Task::Reg) {
      if (flavor(v) != Flavor::Soft || !std::get<SoftValue>(v.v).is_vector())
        throw ExecError(
            "task reg requires the program to return a soft vector, got " +
            describe(v));
      const SoftValue& s = std::get<SoftValue>(v.v);
      int best = 0;
      for (int i = 1; i < s.dim(); ++i)
        if (s.at(i) > s.at(best)) best = i;
      ans.kind = Answer::Kind::ObjectRef;
      ans.object_id = best;
      ans.scores = s.data();
      ans.distribution = soft::softmax(s.data());
      ans.raw = s.at(best);
      final_soft_ = soft::extract(tape_, s, best);
      return;
    }
    switch (flavor(v)) {
      case Flavor::Soft: {
        const SoftValue& s = std::get<SoftValue>(v.v);
        if (!s.is_scalar())
          throw ExecError("task vqa cannot answer with a " + describe(v) +
                          "; reduce it (exists/forall/count/iota)");
        ans.kind = Answer::Kind::YesNo;
        ans.raw = s.as_scalar();
        ans.yes = ans.raw >= 0.5;
        final_soft_ = s;
        return;
      }
      case Flavor::SoftCount: {
        const SoftValue& s = std::get<SoftValue>(v.v);
        ans.kind = Answer::Kind::Count;
        ans.raw = s.as_scalar();
        ans.count = round_half_up(ans.raw);
        final_soft_ = s;
        return;
      }
      case Flavor::Boolean:
        ans.kind = Answer::Kind::YesNo;
        ans.yes = std::get<bool>(v.v);
        ans.raw = ans.yes ? 1.0 : 0.0;
        return;
      case Flavor::Text:
        ans.kind = Answer::Kind::Text;
        ans.text = std::get<std::string>(v.v);
        return;
      case Flavor::Integer:
        ans.kind = Answer::Kind::Count;
        ans.count = std::get<long long>(v.v);
        ans.raw = static_cast<double>(ans.count);
        return;
      default:
        throw ExecError("task vqa cannot answer with a " + describe(v));
    }
  }

  void attach_gradients(Outcome& out) {
    const soft::GradientMap grads = soft::backward(tape_, *final_soft_);
    out.gradients.emplace();
    for (std::size_t i = 0; i < score_nodes_.size(); ++i) {
      if (score_nodes_[i] == soft::kNoNode) continue;
      (*out.gradients)[i] = grads.at(score_nodes_[i]);
    }
  }

  // ---- bookkeeping ----

  void step(const Span& span) {
    if (++steps_ > opts_.step_budget)
      fail(span, "step budget exceeded (" +
                     std::to_string(opts_.step_budget) + " steps)");
  }

  void charge_call(const Span& span) {
    if (++calls_ > opts_.call_budget)
      fail(span, "grounder call budget exceeded (" +
                     std::to_string(opts_.call_budget) + " calls)");
  }

  [[noreturn]] void fail(const Span& span, const std::string& message) const {
    throw ExecError(message, span);
  }

  template <typename F>
  auto guarded(const Span& span, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const SoftError& e) {
      throw ExecError(e.what(), span);
    }
  }

  const lang::Program& program_;
  ground::Grounder& grounder_;
  ExecOptions opts_;
  soft::Tape tape_;
  std::map<std::string, Value> env_;
  std::vector<TraceEntry> trace_;
  std::vector<soft::NodeId> score_nodes_;
  std::optional<SoftValue> final_soft_;
  long long steps_ = 0;
  long long calls_ = 0;
};

}  // namespace

std::string answer_to_string(const Answer& a) {
  char buf[64];
  switch (a.kind) {
    case Answer::Kind::YesNo:
      std::snprintf(buf, sizeof(buf), "%s (score=%.3f)", a.yes ? "yes" : "no",
                    a.raw);
      return buf;
    case Answer::Kind::Count:
      std::snprintf(buf, sizeof(buf), "%lld (count=%.3f)", a.count, a.raw);
      return buf;
    case Answer::Kind::Text:
      return a.text;
    case Answer::Kind::ObjectRef:
      return "object " + std::to_string(a.object_id);
    default:
      return "no objects";
  }
}

Outcome run(const lang::Program& program, ground::Grounder& grounder,
            const ExecOptions& opts) {
  Interpreter interp(program, grounder, opts);
  return interp.run_program();
}

}  // namespace nept::exec
