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

#include "nept/soft/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nept::soft {

namespace {

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Scalar: return "Scalar";
    case Shape::Vector: return "Vector";
    case Shape::Matrix: return "Matrix";
  }
  return "?";
}

std::string shape_str(const SoftValue& v) {
  std::string s = shape_name(v.shape());
  if (!v.is_scalar()) s += "(" + std::to_string(v.dim()) + ")";
  return s;
}

/// Binds v to this tape, recording a leaf if it is not on one yet.
SoftValue bind(Tape& tape, const SoftValue& v) {
  if (!v.on_tape()) return tape.leaf(v);
  if (v.tape_id() != tape.id())
    throw SoftError("soft op: operand belongs to a different tape");
  return v;
}

SoftValue wrap(const Tape& tape, Shape shape, int n, std::vector<double> data,
               NodeId id, bool is_count) {
  return detail::Access::make(shape, n, std::move(data), id, tape.id(),
                              is_count);
}

void reject_count(const SoftValue& v, const char* what) {
  if (v.is_count())
    throw SoftError(std::string(what) + ": soft counts are not valid operands");
}

SoftValue elementwise2(Tape& tape, OpKind op, const SoftValue& a,
                       const SoftValue& b) {
  TapeNode node;
  node.op = op;
  node.a = a.node();
  node.b = b.node();
  node.n = a.is_scalar() ? 0 : a.dim();
  node.matrix = a.is_matrix();
  const std::size_t size = a.size();
  node.out.resize(size);
  node.sel.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double x = a.data()[i];
    const double y = b.data()[i];
    // Ties select the lhs (lowest index argument).
    const bool pick_a = (op == OpKind::Min2) ? (x <= y) : (x >= y);
    node.sel[i] = pick_a ? 0 : 1;
    node.out[i] = pick_a ? x : y;
  }
  std::vector<double> out = node.out;
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, a.shape(), a.dim(), std::move(out), id, false);
}

SoftValue one_minus(Tape& tape, const SoftValue& a) {
  TapeNode node;
  node.op = OpKind::OneMinus;
  node.a = a.node();
  node.n = a.is_scalar() ? 0 : a.dim();
  node.matrix = a.is_matrix();
  node.out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) node.out[i] = 1.0 - a.data()[i];
  std::vector<double> out = node.out;
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, a.shape(), a.dim(), std::move(out), id, false);
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> softmax(const std::vector<double>& x, double temp) {
  if (x.empty()) throw SoftError("softmax: empty input");
  if (!(temp > 0.0)) throw SoftError("softmax: temperature must be > 0");
  double mx = x[0] / temp;
  for (double v : x) mx = std::max(mx, v / temp);
  std::vector<double> e(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e[i] = std::exp(x[i] / temp - mx);
    sum += e[i];
  }
  for (double& v : e) v /= sum;
  return e;
}

SoftValue connective(Tape& tape, Connective kind, const SoftValue& lhs) {
  if (kind != Connective::Not)
    throw SoftError("connective: binary connective requires an rhs");
  reject_count(lhs, "Not");
  return one_minus(tape, bind(tape, lhs));
}

SoftValue connective(Tape& tape, Connective kind, const SoftValue& lhs,
                     const SoftValue& rhs) {
  if (kind == Connective::Not)
    throw SoftError("connective: Not takes a single operand");
  reject_count(lhs, "connective");
  reject_count(rhs, "connective");

  if (kind == Connective::And && lhs.is_vector() && rhs.is_matrix())
    return relate(tape, lhs, rhs);

  if (lhs.shape() != rhs.shape() || lhs.dim() != rhs.dim())
    throw SoftError("connective: shape mismatch " + shape_str(lhs) + " vs " +
                    shape_str(rhs));

  const SoftValue a = bind(tape, lhs);
  const SoftValue b = bind(tape, rhs);
  switch (kind) {
    case Connective::And:
      return elementwise2(tape, OpKind::Min2, a, b);
    case Connective::Or:
      return elementwise2(tape, OpKind::Max2, a, b);
    case Connective::Implies:
      return elementwise2(tape, OpKind::Max2, one_minus(tape, a), b);
    case Connective::Not:
      break;
  }
  throw SoftError("connective: unreachable");
}

SoftValue relate(Tape& tape, const SoftValue& alpha, const SoftValue& beta,
                 bool literal) {
  if (!alpha.is_vector() || !beta.is_matrix())
    throw SoftError("relate: expected Vector and Matrix, got " +
                    shape_str(alpha) + " and " + shape_str(beta));
  if (alpha.dim() != beta.dim())
    throw SoftError("relate: dimension mismatch " + shape_str(alpha) +
                    " vs " + shape_str(beta));
  const SoftValue a = bind(tape, alpha);
  const SoftValue b = bind(tape, beta);
  const int n = a.dim();

  TapeNode node;
  node.op = literal ? OpKind::RelateLit : OpKind::Relate;
  node.a = a.node();
  node.b = b.node();
  node.n = n;
  node.out.resize(n);
  node.aux.resize(n);
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    if (literal) {
      double row = 0.0;
      for (int y = 0; y < n; ++y) row += b.at(x, y);
      s = a.at(x) * row;
    } else {
      for (int y = 0; y < n; ++y) s += a.at(y) * b.at(x, y);
    }
    node.aux[x] = s;
    node.out[x] = std::min(1.0, s);
  }
  std::vector<double> out = node.out;
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Vector, n, std::move(out), id, false);
}

SoftValue quantify(Tape& tape, Quantifier kind, const SoftValue& v) {
  if (!v.is_vector())
    throw SoftError("quantify: expected a Vector, got " + shape_str(v));
  if (v.size() == 0) throw SoftError("quantify: empty vector");
  const SoftValue a = bind(tape, v);
  const int n = a.dim();

  TapeNode node;
  node.a = a.node();
  switch (kind) {
    case Quantifier::Exists:
    case Quantifier::Forall: {
      node.op = kind == Quantifier::Exists ? OpKind::ReduceMax
                                           : OpKind::ReduceMin;
      int arg = 0;
      for (int i = 1; i < n; ++i) {
        const bool better = kind == Quantifier::Exists
                                ? a.at(i) > a.at(arg)
                                : a.at(i) < a.at(arg);
        if (better) arg = i;  // strict: ties keep the lowest index
      }
      node.sel = {arg};
      node.out = {a.at(arg)};
      const NodeId id = tape.push(std::move(node));
      return wrap(tape, Shape::Scalar, 1, {a.at(arg)}, id, false);
    }
    case Quantifier::Count: {
      node.op = OpKind::ReduceSum;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += a.at(i);
      node.out = {s};
      const NodeId id = tape.push(std::move(node));
      return wrap(tape, Shape::Scalar, 1, {s}, id, true);
    }
    case Quantifier::Iota: {
      node.op = OpKind::Softmax;
      node.n = n;
      std::vector<double> e = softmax(a.data());
      node.out = e;
      const NodeId id = tape.push(std::move(node));
      return wrap(tape, Shape::Vector, n, std::move(e), id, false);
    }
  }
  throw SoftError("quantify: unreachable");
}

SoftValue soft_compare(Tape& tape, Compare kind, const SoftValue& s1,
                       const SoftValue& s2, const SmoothingParams& p) {
  p.validate();
  if (!s1.is_scalar() || !s2.is_scalar())
    throw SoftError("soft_compare: operands must be scalars, got " +
                    shape_str(s1) + " and " + shape_str(s2));
  const SoftValue a = bind(tape, s1);
  const SoftValue b = bind(tape, s2);
  const double x = a.as_scalar();
  const double y = b.as_scalar();
  const double z = kind == Compare::Eq
                       ? p.tau * (p.gamma - std::fabs(x - y)) / p.gamma
                       : p.tau * (x - y - 1.0 + p.gamma);
  const double out = sigmoid(z);

  TapeNode node;
  node.op = kind == Compare::Eq ? OpKind::CmpEq : OpKind::CmpGt;
  node.a = a.node();
  node.b = b.node();
  node.out = {out};
  node.aux = {p.tau, p.gamma};
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Scalar, 1, {out}, id, false);
}

SoftValue arith(Tape& tape, Arith kind, const SoftValue& s1,
                const SoftValue& s2) {
  if (!s1.is_scalar() || !s2.is_scalar())
    throw SoftError("arith: operands must be scalars, got " + shape_str(s1) +
                    " and " + shape_str(s2));
  const SoftValue a = bind(tape, s1);
  const SoftValue b = bind(tape, s2);
  const double x = a.as_scalar();
  const double y = b.as_scalar();
  double out = 0.0;
  OpKind op = OpKind::AddS;
  switch (kind) {
    case Arith::Add: out = x + y; op = OpKind::AddS; break;
    case Arith::Sub: out = x - y; op = OpKind::SubS; break;
    case Arith::Mul: out = x * y; op = OpKind::MulS; break;
    case Arith::Div:
      if (y == 0.0) throw SoftError("arith: division by zero");
      out = x / y;
      op = OpKind::DivS;
      break;
  }
  TapeNode node;
  node.op = op;
  node.a = a.node();
  node.b = b.node();
  node.out = {out};
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Scalar, 1, {out}, id, true);
}

SoftValue abs_value(Tape& tape, const SoftValue& s) {
  if (!s.is_scalar())
    throw SoftError("abs: operand must be a scalar, got " + shape_str(s));
  const SoftValue a = bind(tape, s);
  const double out = std::fabs(a.as_scalar());
  TapeNode node;
  node.op = OpKind::AbsS;
  node.a = a.node();
  node.out = {out};
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Scalar, 1, {out}, id, true);
}

SoftValue extract(Tape& tape, const SoftValue& v, int index) {
  if (!v.is_vector())
    throw SoftError("extract: expected a Vector, got " + shape_str(v));
  if (index < 0 || index >= v.dim())
    throw SoftError("extract: index " + std::to_string(index) +
                    " out of range for " + shape_str(v));
  const SoftValue a = bind(tape, v);
  TapeNode node;
  node.op = OpKind::Extract;
  node.a = a.node();
  node.sel = {index};
  node.out = {a.at(index)};
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Scalar, 1, {a.at(index)}, id, false);
}

SoftValue extract_row(Tape& tape, const SoftValue& m, int row) {
  if (!m.is_matrix())
    throw SoftError("extract_row: expected a Matrix, got " + shape_str(m));
  if (row < 0 || row >= m.dim())
    throw SoftError("extract_row: row " + std::to_string(row) +
                    " out of range for " + shape_str(m));
  const SoftValue a = bind(tape, m);
  const int n = a.dim();
  TapeNode node;
  node.op = OpKind::ExtractRow;
  node.a = a.node();
  node.sel = {row};
  node.n = n;
  node.out.resize(n);
  for (int y = 0; y < n; ++y) node.out[y] = a.at(row, y);
  std::vector<double> out = node.out;
  const NodeId id = tape.push(std::move(node));
  return wrap(tape, Shape::Vector, n, std::move(out), id, false);
}

GradientMap backward(const Tape& tape, const SoftValue& output) {
  if (!output.on_tape() || output.tape_id() != tape.id())
    throw SoftError("backward: output is not recorded on this tape");
  if (!output.is_scalar())
    throw SoftError("backward: output must be a Scalar");

  std::vector<std::vector<double>> adj(tape.size());
  for (std::size_t i = 0; i < tape.size(); ++i)
    adj[i].assign(tape.node(static_cast<NodeId>(i)).out.size(), 0.0);
  adj[static_cast<std::size_t>(output.node())][0] = 1.0;

  const auto sign = [](double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); };

  for (NodeId id = output.node(); id >= 0; --id) {
    const TapeNode& node = tape.node(id);
    const std::vector<double>& g = adj[static_cast<std::size_t>(id)];
    switch (node.op) {
      case OpKind::Leaf:
        break;
      case OpKind::Min2:
      case OpKind::Max2: {
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        auto& gb = adj[static_cast<std::size_t>(node.b)];
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (node.sel[i] == 0) ga[i] += g[i];
          else gb[i] += g[i];
        }
        break;
      }
      case OpKind::OneMinus: {
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] -= g[i];
        break;
      }
      case OpKind::Relate: {
        const auto& av = tape.node(node.a).out;
        const auto& bv = tape.node(node.b).out;
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        auto& gb = adj[static_cast<std::size_t>(node.b)];
        const int n = node.n;
        for (int x = 0; x < n; ++x) {
          if (node.aux[x] >= 1.0) continue;  // clamped: min picked the bound
          const double gx = g[static_cast<std::size_t>(x)];
          if (gx == 0.0) continue;
          for (int y = 0; y < n; ++y) {
            ga[y] += gx * bv[static_cast<std::size_t>(x) * n + y];
            gb[static_cast<std::size_t>(x) * n + y] += gx * av[y];
          }
        }
        break;
      }
      case OpKind::RelateLit: {
        const auto& av = tape.node(node.a).out;
        const auto& bv = tape.node(node.b).out;
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        auto& gb = adj[static_cast<std::size_t>(node.b)];
        const int n = node.n;
        for (int x = 0; x < n; ++x) {
          if (node.aux[x] >= 1.0) continue;
          const double gx = g[static_cast<std::size_t>(x)];
          if (gx == 0.0) continue;
          double row = 0.0;
          for (int y = 0; y < n; ++y) row += bv[static_cast<std::size_t>(x) * n + y];
          ga[x] += gx * row;
          for (int y = 0; y < n; ++y)
            gb[static_cast<std::size_t>(x) * n + y] += gx * av[x];
        }
        break;
      }
      case OpKind::ReduceMax:
      case OpKind::ReduceMin:
        adj[static_cast<std::size_t>(node.a)][node.sel[0]] += g[0];
        break;
      case OpKind::ReduceSum: {
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[0];
        break;
      }
      case OpKind::Softmax: {
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        double dot = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) dot += g[j] * node.out[j];
        for (std::size_t i = 0; i < g.size(); ++i)
          ga[i] += node.out[i] * (g[i] - dot);
        break;
      }
      case OpKind::CmpEq: {
        const double s1 = tape.node(node.a).out[0];
        const double s2 = tape.node(node.b).out[0];
        const double tau = node.aux[0], gamma = node.aux[1];
        const double dsig = node.out[0] * (1.0 - node.out[0]);
        const double f = dsig * (-tau / gamma) * sign(s1 - s2);
        adj[static_cast<std::size_t>(node.a)][0] += g[0] * f;
        adj[static_cast<std::size_t>(node.b)][0] -= g[0] * f;
        break;
      }
      case OpKind::CmpGt: {
        const double tau = node.aux[0];
        const double dsig = node.out[0] * (1.0 - node.out[0]);
        adj[static_cast<std::size_t>(node.a)][0] += g[0] * dsig * tau;
        adj[static_cast<std::size_t>(node.b)][0] -= g[0] * dsig * tau;
        break;
      }
      case OpKind::Extract:
        adj[static_cast<std::size_t>(node.a)][node.sel[0]] += g[0];
        break;
      case OpKind::ExtractRow: {
        auto& ga = adj[static_cast<std::size_t>(node.a)];
        const int n = node.n;
        for (int y = 0; y < n; ++y)
          ga[static_cast<std::size_t>(node.sel[0]) * n + y] += g[y];
        break;
      }
      case OpKind::AddS:
        adj[static_cast<std::size_t>(node.a)][0] += g[0];
        adj[static_cast<std::size_t>(node.b)][0] += g[0];
        break;
      case OpKind::SubS:
        adj[static_cast<std::size_t>(node.a)][0] += g[0];
        adj[static_cast<std::size_t>(node.b)][0] -= g[0];
        break;
      case OpKind::MulS:
        adj[static_cast<std::size_t>(node.a)][0] +=
            g[0] * tape.node(node.b).out[0];
        adj[static_cast<std::size_t>(node.b)][0] +=
            g[0] * tape.node(node.a).out[0];
        break;
      case OpKind::DivS: {
        const double s1 = tape.node(node.a).out[0];
        const double s2 = tape.node(node.b).out[0];
        adj[static_cast<std::size_t>(node.a)][0] += g[0] / s2;
        adj[static_cast<std::size_t>(node.b)][0] -= g[0] * s1 / (s2 * s2);
        break;
      }
      case OpKind::AbsS: {
        const double s = tape.node(node.a).out[0];
        adj[static_cast<std::size_t>(node.a)][0] += g[0] * sign(s);
        break;
      }
    }
  }

  GradientMap grads;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const NodeId id = static_cast<NodeId>(i);
    if (!tape.is_leaf(id)) continue;
    for (double v : adj[i])
      if (!std::isfinite(v))
        throw SoftError("backward: non-finite adjoint at leaf " +
                        std::to_string(id));
    grads.emplace(id, std::move(adj[i]));
  }
  return grads;
}

}  // namespace nept::soft
