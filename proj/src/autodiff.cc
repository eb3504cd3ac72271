// src/autodiff.cc

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "narb/autodiff.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "narb/common.h"
#include "narb/kernels.h"

namespace narb::ad {

const char *OpName(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "mul";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kRelu: return "relu";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kEmbedLookup: return "embed_lookup";
    case OpKind::kSoftmaxCrossEntropy: return "softmax_cross_entropy";
    case OpKind::kSum: return "sum";
    case OpKind::kScale: return "scale";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kStack: return "stack";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kCustom: return "custom";
  }
  return "?";
}

// ParameterSet ----------------------------------------------------------------

void GlorotInit(Tensor &t, Rng &rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
  for (double &v : t.values()) v = rng.Uniform(-a, a);
}

Parameter &ParameterSet::Add(const std::string &name, std::size_t rows, std::size_t cols) {
  if (by_name_.count(name)) throw Error("duplicate parameter name '" + name + "'");
  params_.push_back(std::make_unique<Parameter>(name, rows, cols));
  by_name_[name] = params_.back().get();
  return *params_.back();
}

Parameter &ParameterSet::AddGlorot(const std::string &name, std::size_t rows, std::size_t cols,
                                   Rng &rng) {
  Parameter &p = Add(name, rows, cols);
  GlorotInit(p.value, rng);
  return p;
}

Parameter *ParameterSet::Find(const std::string &name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const Parameter *ParameterSet::Find(const std::string &name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

Parameter &ParameterSet::Get(const std::string &name) {
  Parameter *p = Find(name);
  if (!p) throw Error("no parameter named '" + name + "'");
  return *p;
}

std::vector<Parameter *> ParameterSet::All() {
  std::vector<Parameter *> out;
  for (auto &p : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter *> ParameterSet::All() const {
  std::vector<const Parameter *> out;
  for (const auto &p : params_) out.push_back(p.get());
  return out;
}

std::size_t ParameterSet::NumValues() const {
  std::size_t n = 0;
  for (const auto &p : params_) n += p->value.size();
  return n;
}

void ParameterSet::ZeroGrad() {
  for (auto &p : params_) p->ZeroGrad();
}

// Var / Tape -----------------------------------------------------------------

const Tensor &Var::value() const { return tape_->ValueOf(id_); }
bool Var::tracked() const { return tape_->TrackedOf(id_); }

const Tensor &Tape::ValueOf(int id) const {
  const Node &n = nodes_[static_cast<std::size_t>(id)];
  return n.ext_value ? *n.ext_value : n.value;
}

const Tensor &Tape::GradOf(Var v) const {
  const Node &n = nodes_[static_cast<std::size_t>(v.id())];
  return n.ext_grad ? *n.ext_grad : n.grad;
}

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Param(Parameter &p) {
  Node n;
  n.ext_value = &p.value;
  if (grad_enabled_) {
    n.tracked = true;
    n.ext_grad = &p.grad;
  }
  return Push(std::move(n));
}

namespace {

[[noreturn]] void ShapeError(OpKind kind, std::span<const Var> in, const std::string &what) {
  std::string msg = std::string(OpName(kind)) + ": " + what + " (shapes";
  for (const Var &v : in) msg += " " + v.value().ShapeString();
  throw Error(msg + ")");
}

}  // namespace

Var Tape::Apply(OpKind kind, std::span<const Var> inputs, const OpArgs &args) {
  for (const Var &v : inputs)
    if (v.tape() != this) throw Error(std::string(OpName(kind)) + ": input from another tape");
  auto arity = [&](std::size_t n) {
    if (inputs.size() != n)
      ShapeError(kind, inputs, "expected " + std::to_string(n) + " inputs");
  };
  Node node;
  node.op = kind;
  node.args = args;
  for (const Var &v : inputs) {
    node.in.push_back(v.id());
    node.tracked = node.tracked || v.tracked();
  }
  switch (kind) {
    case OpKind::kMatmul: {
      arity(2);
      const Tensor &a = inputs[0].value();
      const Tensor &b = inputs[1].value();
      if (a.cols() != b.rows()) ShapeError(kind, inputs, "inner dimensions differ");
      node.value = Tensor(a.rows(), b.cols());
      if (b.cols() == 1)
        kernels::Gemv(a.span(), a.rows(), a.cols(), b.span(), node.value.span());
      else
        kernels::Gemm(a.span(), b.span(), a.rows(), a.cols(), b.cols(), node.value.span());
      break;
    }
    case OpKind::kAdd:
    case OpKind::kMul: {
      arity(2);
      const Tensor &a = inputs[0].value();
      const Tensor &b = inputs[1].value();
      if (!a.SameShape(b)) ShapeError(kind, inputs, "shapes differ");
      node.value = a;
      if (kind == OpKind::kAdd)
        for (std::size_t i = 0; i < a.size(); ++i) node.value[i] += b[i];
      else
        for (std::size_t i = 0; i < a.size(); ++i) node.value[i] *= b[i];
      break;
    }
    case OpKind::kConcat: {
      if (inputs.empty()) ShapeError(kind, inputs, "no inputs");
      std::size_t n = 0;
      for (const Var &v : inputs) {
        if (!v.value().IsColumn()) ShapeError(kind, inputs, "inputs must be column vectors");
        n += v.rows();
      }
      node.value = Tensor(n, 1);
      std::size_t off = 0;
      for (const Var &v : inputs) {
        std::copy(v.value().values().begin(), v.value().values().end(),
                  node.value.values().begin() + static_cast<std::ptrdiff_t>(off));
        off += v.rows();
      }
      break;
    }
    case OpKind::kSlice: {
      arity(1);
      const Tensor &a = inputs[0].value();
      if (!a.IsColumn() || args.begin + args.length > a.rows() || args.length == 0)
        ShapeError(kind, inputs,
                   "range [" + std::to_string(args.begin) + ", " +
                       std::to_string(args.begin + args.length) + ") out of bounds");
      node.value = Tensor(args.length, 1);
      std::copy_n(a.data() + args.begin, args.length, node.value.data());
      break;
    }
    case OpKind::kRelu:
    case OpKind::kSigmoid:
    case OpKind::kTanh: {
      arity(1);
      node.value = inputs[0].value();
      for (double &v : node.value.values()) {
        if (kind == OpKind::kRelu)
          v = v > 0.0 ? v : 0.0;
        else if (kind == OpKind::kSigmoid)
          v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
        else
          v = std::tanh(v);
      }
      break;
    }
    case OpKind::kEmbedLookup: {
      arity(1);
      const Tensor &table = inputs[0].value();
      if (args.index >= table.rows())
        throw Error("embed_lookup: index " + std::to_string(args.index) +
                    " out of range for table " + table.ShapeString());
      node.value = Tensor(table.cols(), 1);
      std::copy_n(table.data() + args.index * table.cols(), table.cols(), node.value.data());
      break;
    }
    case OpKind::kSoftmaxCrossEntropy: {
      arity(1);
      const Tensor &z = inputs[0].value();
      if (!z.IsColumn() || z.empty()) ShapeError(kind, inputs, "logits must be a column vector");
      if (args.index >= z.rows())
        throw Error("softmax_cross_entropy: target " + std::to_string(args.index) +
                    " out of range for " + z.ShapeString());
      const double m = *std::max_element(z.values().begin(), z.values().end());
      double s = 0.0;
      for (double v : z.values()) s += std::exp(v - m);
      const double lse = m + std::log(s);
      node.value = Tensor::Scalar(lse - z[args.index]);
      node.aux = Tensor(z.rows(), 1);
      for (std::size_t i = 0; i < z.rows(); ++i) node.aux[i] = std::exp(z[i] - lse);
      break;
    }
    case OpKind::kSum: {
      arity(1);
      double s = 0.0;
      for (double v : inputs[0].value().values()) s += v;
      node.value = Tensor::Scalar(s);
      break;
    }
    case OpKind::kScale: {
      arity(1);
      node.value = inputs[0].value();
      for (double &v : node.value.values()) v *= args.scalar;
      break;
    }
    case OpKind::kSoftmax: {
      arity(1);
      const Tensor &z = inputs[0].value();
      if (!z.IsColumn() || z.empty()) ShapeError(kind, inputs, "input must be a column vector");
      node.value = Tensor::Column(SoftmaxOf(z.span()));
      break;
    }
    case OpKind::kStack: {
      if (inputs.empty()) ShapeError(kind, inputs, "no inputs");
      const std::size_t w = inputs[0].rows();
      for (const Var &v : inputs)
        if (!v.value().IsColumn() || v.rows() != w)
          ShapeError(kind, inputs, "inputs must be equal-length column vectors");
      node.value = Tensor(inputs.size(), w);
      for (std::size_t r = 0; r < inputs.size(); ++r)
        std::copy_n(inputs[r].value().data(), w, node.value.data() + r * w);
      break;
    }
    case OpKind::kTranspose: {
      arity(1);
      const Tensor &a = inputs[0].value();
      node.value = Tensor(a.cols(), a.rows());
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) node.value(c, r) = a(r, c);
      break;
    }
    case OpKind::kLeaf:
    case OpKind::kCustom:
      throw Error(std::string("apply: ") + OpName(kind) + " cannot be applied directly");
  }
  if (!grad_enabled_) {
    node.tracked = false;
    node.in.clear();
    node.aux = Tensor();
  }
  return Push(std::move(node));
}

Var Tape::Custom(Tensor value, std::vector<Var> inputs, CustomBackward backward) {
  Node node;
  node.op = OpKind::kCustom;
  node.value = std::move(value);
  for (const Var &v : inputs) {
    if (v.tape() != this) throw Error("custom: input from another tape");
    node.in.push_back(v.id());
    node.tracked = node.tracked || v.tracked();
  }
  node.tracked = node.tracked && grad_enabled_;
  node.custom = std::move(backward);
  return Push(std::move(node));
}

Tensor *Tape::GradBuffer(int id) {
  Node &n = nodes_[static_cast<std::size_t>(id)];
  if (!n.tracked) return nullptr;
  if (n.ext_grad) return n.ext_grad;
  if (n.grad.empty()) {
    const Tensor &v = ValueOf(id);
    n.grad = Tensor(v.rows(), v.cols());
  }
  return &n.grad;
}

void Tape::Backward(Var loss) {
  if (loss.tape() != this) throw Error("backward: loss belongs to another tape");
  if (!loss.tracked()) throw Error("backward: loss is not tracked (no parameter feeds it)");
  if (loss.size() != 1)
    throw Error("backward: loss must be a scalar, got " + loss.value().ShapeString());
  Tensor *seed = GradBuffer(loss.id());
  (*seed)[0] += 1.0;
  for (std::size_t k = static_cast<std::size_t>(loss.id()) + 1; k-- > 0;) {
    Node &n = nodes_[k];
    if (!n.tracked || n.op == OpKind::kLeaf) continue;
    if (n.grad.empty()) continue;  // nothing flowed into this node
    BackwardNode(n, n.grad);
  }
}

void Tape::BackwardNode(Node &n, const Tensor &g) {
  auto in_val = [&](std::size_t k) -> const Tensor & { return ValueOf(n.in[k]); };
  auto in_grad = [&](std::size_t k) { return GradBuffer(n.in[k]); };
  switch (n.op) {
    case OpKind::kMatmul: {
      const Tensor &a = in_val(0);
      const Tensor &b = in_val(1);
      if (Tensor *ga = in_grad(0)) {
        if (b.cols() == 1) {
          kernels::Ger(g.span(), b.span(), a.rows(), a.cols(), ga->span());
        } else {
          for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t p = 0; p < a.cols(); ++p) {
              double s = 0.0;
              for (std::size_t j = 0; j < b.cols(); ++j) s += g(i, j) * b(p, j);
              (*ga)(i, p) += s;
            }
        }
      }
      if (Tensor *gb = in_grad(1)) {
        if (b.cols() == 1) {
          kernels::GemvTransAcc(a.span(), a.rows(), a.cols(), g.span(), gb->span());
        } else {
          for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t p = 0; p < a.cols(); ++p) {
              const double aip = a(i, p);
              for (std::size_t j = 0; j < b.cols(); ++j) (*gb)(p, j) += aip * g(i, j);
            }
        }
      }
      break;
    }
    case OpKind::kAdd:
      for (std::size_t k = 0; k < 2; ++k)
        if (Tensor *gi = in_grad(k))
          for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += g[i];
      break;
    case OpKind::kMul: {
      const Tensor &a = in_val(0);
      const Tensor &b = in_val(1);
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * b[i];
      if (Tensor *gb = in_grad(1))
        for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * a[i];
      break;
    }
    case OpKind::kConcat: {
      std::size_t off = 0;
      for (std::size_t k = 0; k < n.in.size(); ++k) {
        const std::size_t len = in_val(k).size();
        if (Tensor *gi = in_grad(k))
          for (std::size_t i = 0; i < len; ++i) (*gi)[i] += g[off + i];
        off += len;
      }
      break;
    }
    case OpKind::kSlice:
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < n.args.length; ++i) (*ga)[n.args.begin + i] += g[i];
      break;
    case OpKind::kRelu:
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i)
          if (n.value[i] > 0.0) (*ga)[i] += g[i];
      break;
    case OpKind::kSigmoid:
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i)
          (*ga)[i] += g[i] * n.value[i] * (1.0 - n.value[i]);
      break;
    case OpKind::kTanh:
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i)
          (*ga)[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
      break;
    case OpKind::kEmbedLookup:
      if (Tensor *gt = in_grad(0)) {
        double *row = gt->data() + n.args.index * gt->cols();
        for (std::size_t i = 0; i < g.size(); ++i) row[i] += g[i];
      }
      break;
    case OpKind::kSoftmaxCrossEntropy:
      if (Tensor *gz = in_grad(0)) {
        for (std::size_t i = 0; i < n.aux.size(); ++i)
          (*gz)[i] += g[0] * (n.aux[i] - (i == n.args.index ? 1.0 : 0.0));
      }
      break;
    case OpKind::kSum:
      if (Tensor *ga = in_grad(0))
        for (double &v : ga->values()) v += g[0];
      break;
    case OpKind::kScale:
      if (Tensor *ga = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += n.args.scalar * g[i];
      break;
    case OpKind::kSoftmax:
      if (Tensor *ga = in_grad(0)) {
        double dot = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * n.value[i];
        for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += n.value[i] * (g[i] - dot);
      }
      break;
    case OpKind::kStack: {
      const std::size_t w = n.value.cols();
      for (std::size_t r = 0; r < n.in.size(); ++r)
        if (Tensor *gi = in_grad(r))
          for (std::size_t i = 0; i < w; ++i) (*gi)[i] += g(r, i);
      break;
    }
    case OpKind::kTranspose:
      if (Tensor *ga = in_grad(0))
        for (std::size_t r = 0; r < ga->rows(); ++r)
          for (std::size_t c = 0; c < ga->cols(); ++c) (*ga)(r, c) += g(c, r);
      break;
    case OpKind::kCustom: {
      std::vector<Tensor *> grads;
      for (std::size_t k = 0; k < n.in.size(); ++k) grads.push_back(in_grad(k));
      n.custom(g, grads);
      break;
    }
    case OpKind::kLeaf:
      break;
  }
}

// Free functions ---------------------------------------------------------------

namespace {

Var Apply1(OpKind kind, Var a, const OpArgs &args = {}) {
  const Var in[1] = {a};
  return a.tape()->Apply(kind, in, args);
}

Var Apply2(OpKind kind, Var a, Var b) {
  const Var in[2] = {a, b};
  return a.tape()->Apply(kind, in);
}

}  // namespace

Var Matmul(Var a, Var b) { return Apply2(OpKind::kMatmul, a, b); }
Var Add(Var a, Var b) { return Apply2(OpKind::kAdd, a, b); }
Var Mul(Var a, Var b) { return Apply2(OpKind::kMul, a, b); }
Var Concat(std::initializer_list<Var> parts) {
  return Concat(std::span<const Var>(parts.begin(), parts.size()));
}
Var Concat(std::span<const Var> parts) {
  if (parts.empty()) throw Error("concat: no inputs");
  return parts[0].tape()->Apply(OpKind::kConcat, parts);
}
Var Slice(Var a, std::size_t begin, std::size_t length) {
  OpArgs args;
  args.begin = begin;
  args.length = length;
  return Apply1(OpKind::kSlice, a, args);
}
Var Relu(Var a) { return Apply1(OpKind::kRelu, a); }
Var Sigmoid(Var a) { return Apply1(OpKind::kSigmoid, a); }
Var Tanh(Var a) { return Apply1(OpKind::kTanh, a); }
Var EmbedLookup(Var table, std::size_t index) {
  OpArgs args;
  args.index = index;
  return Apply1(OpKind::kEmbedLookup, table, args);
}
Var SoftmaxCrossEntropy(Var logits, std::size_t target) {
  OpArgs args;
  args.index = target;
  return Apply1(OpKind::kSoftmaxCrossEntropy, logits, args);
}
Var Sum(Var a) { return Apply1(OpKind::kSum, a); }
Var Scale(Var a, double s) {
  OpArgs args;
  args.scalar = s;
  return Apply1(OpKind::kScale, a, args);
}
Var Softmax(Var a) { return Apply1(OpKind::kSoftmax, a); }
Var Stack(std::span<const Var> rows) {
  if (rows.empty()) throw Error("stack: no inputs");
  return rows[0].tape()->Apply(OpKind::kStack, rows);
}
Var Transpose(Var a) { return Apply1(OpKind::kTranspose, a); }

std::vector<double> SoftmaxOf(std::span<const double> z) {
  std::vector<double> p(z.size());
  if (z.empty()) return p;
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += (p[i] = std::exp(z[i] - m));
  for (double &v : p) v /= s;
  return p;
}

std::vector<double> LogSoftmaxOf(std::span<const double> z) {
  std::vector<double> out(z.size());
  if (z.empty()) return out;
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  const double lse = m + std::log(s);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - lse;
  return out;
}

// Gradient check ----------------------------------------------------------------

namespace {

double Evaluate(const LossFn &f) {
  Tape tape(false);
  const double v = f(tape).value()[0];
  if (!std::isfinite(v)) throw Error("grad_check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult GradCheck(const LossFn &f, ParameterSet &params, double h) {
  auto all = params.All();
  return GradCheck(f, all, h);
}

GradCheckResult GradCheck(const LossFn &f, std::span<Parameter *const> params, double h) {
  if (!(h > 0.0)) throw Error("grad_check: step must be positive");
  for (Parameter *p : params) p->ZeroGrad();
  {
    Tape tape;
    Var loss = f(tape);
    if (!std::isfinite(loss.value()[0])) throw Error("grad_check: loss is not finite");
    tape.Backward(loss);
  }
  GradCheckResult res;
  for (Parameter *p : params) {
    const Tensor analytic = p->grad;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      p->value[i] = orig + h;
      const double up = Evaluate(f);
      p->value[i] = orig - h;
      const double down = Evaluate(f);
      p->value[i] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[i];
      const double err =
          std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      if (res.worst_param.empty() || err > res.max_rel_error) {
        res.max_rel_error = err;
        res.worst_param = p->name;
        res.worst_index = i;
        res.analytic = a;
        res.numeric = numeric;
      }
    }
    p->ZeroGrad();
  }
  return res;
}

// Adam ----------------------------------------------------------------------------

Adam::Adam(ParameterSet &params, AdamConfig cfg) : params_(params.All()), cfg_(cfg) {
  for (Parameter *p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void Adam::Step() {
  for (Parameter *p : params_)
    for (double g : p->grad.values())
      if (!std::isfinite(g)) throw Error("adam: non-finite gradient in parameter '" + p->name + "'");
  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter &p = *params_[k];
    Tensor &m = m_[k];
    Tensor &v = v_[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p.value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    p.ZeroGrad();
  }
}

// Checkpoints ----------------------------------------------------------------------

namespace {

void PutU32(std::ostream &out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char *>(b), 4);
}

void PutF64(std::ostream &out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char *>(b), 8);
}

bool GetU32(std::istream &in, std::uint32_t &v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char *>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

double GetF64(std::istream &in, const std::string &path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char *>(b), 8)) throw Error(path + ": truncated checkpoint");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void WriteCheckpoint(const std::string &path, const std::vector<CheckpointRecord> &records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path);
  out.write("NARB", 4);
  PutU32(out, kCheckpointVersion);
  for (const auto &r : records) {
    PutU32(out, static_cast<std::uint32_t>(r.name.size()));
    out.write(r.name.data(), static_cast<std::streamsize>(r.name.size()));
    PutU32(out, 2);
    PutU32(out, static_cast<std::uint32_t>(r.value.rows()));
    PutU32(out, static_cast<std::uint32_t>(r.value.cols()));
    for (double v : r.value.values()) PutF64(out, v);
  }
  if (!out) throw Error("write failed: " + path);
}

std::vector<CheckpointRecord> ReadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "NARB", 4) != 0)
    throw Error(path + ": not a NARB checkpoint");
  std::uint32_t version = 0;
  if (!GetU32(in, version) || version != kCheckpointVersion)
    throw Error(path + ": unsupported checkpoint version " + std::to_string(version));
  std::vector<CheckpointRecord> out;
  std::uint32_t name_len;
  while (GetU32(in, name_len)) {
    CheckpointRecord r;
    r.name.resize(name_len);
    if (!in.read(r.name.data(), name_len)) throw Error(path + ": truncated checkpoint");
    std::uint32_t ndim = 0;
    if (!GetU32(in, ndim) || ndim < 1 || ndim > 2)
      throw Error(path + ": bad rank for '" + r.name + "'");
    std::uint32_t dims[2] = {1, 1};
    for (std::uint32_t d = 0; d < ndim; ++d)
      if (!GetU32(in, dims[d])) throw Error(path + ": truncated checkpoint");
    r.value = Tensor(dims[0], dims[1]);
    for (double &v : r.value.values()) v = GetF64(in, path);
    out.push_back(std::move(r));
  }
  return out;
}

void SaveCheckpoint(const std::string &path, const ParameterSet &params) {
  std::vector<CheckpointRecord> records;
  for (const Parameter *p : params.All()) records.push_back({p->name, p->value});
  WriteCheckpoint(path, records);
}

void LoadCheckpoint(const std::string &path, ParameterSet &params) {
  auto records = ReadCheckpoint(path);
  if (records.size() != params.size())
    throw Error(path + ": checkpoint has " + std::to_string(records.size()) +
                " parameters, model expects " + std::to_string(params.size()));
  for (auto &r : records) {
    Parameter *p = params.Find(r.name);
    if (!p) throw Error(path + ": unexpected parameter '" + r.name + "'");
    if (!p->value.SameShape(r.value))
      throw Error(path + ": shape mismatch for '" + r.name + "': file " + r.value.ShapeString() +
                  ", model " + p->value.ShapeString());
    p->value = std::move(r.value);
  }
}

}  // namespace narb::ad
