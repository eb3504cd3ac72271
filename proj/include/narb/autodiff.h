// include/narb/autodiff.h

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

#ifndef NARB_AUTODIFF_H_
#define NARB_AUTODIFF_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "narb/random.h"
#include "narb/tensor.h"

// Reverse-mode differentiation over vectors and matrices of doubles.
//
// A Tape records every operation applied to its Vars in execution order,
// which is already a topological order, so Backward() is a single reverse
// sweep. Parameters live outside the tape; a parameter leaf aliases the
// parameter's value and writes its gradient straight into Parameter::grad,
// so gradients accumulate across uses and across tapes until Zero().
namespace narb::ad {

enum class OpKind {
  kLeaf,
  kMatmul,
  kAdd,
  kMul,
  kConcat,
  kSlice,
  kRelu,
  kSigmoid,
  kTanh,
  kEmbedLookup,
  kSoftmaxCrossEntropy,
  kSum,
  kScale,
  kSoftmax,
  kStack,
  kTranspose,
  kCustom,
};

const char *OpName(OpKind kind);

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}
  void ZeroGrad() { grad.Fill(0.0); }
};

/// Ordered, named collection of parameters. Order is creation order and is
/// the order used by checkpoints and by the optimizer.
class ParameterSet {
 public:
  Parameter &Add(const std::string &name, std::size_t rows, std::size_t cols);
  /// Add + Glorot uniform init with a = sqrt(6 / (fan_in + fan_out)).
  Parameter &AddGlorot(const std::string &name, std::size_t rows, std::size_t cols, Rng &rng);

  Parameter *Find(const std::string &name);
  const Parameter *Find(const std::string &name) const;
  Parameter &Get(const std::string &name);

  std::vector<Parameter *> All();
  std::vector<const Parameter *> All() const;
  std::size_t size() const { return params_.size(); }
  std::size_t NumValues() const;
  void ZeroGrad();

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, Parameter *> by_name_;
};

void GlorotInit(Tensor &t, Rng &rng);

class Tape;

/// Handle to one node of a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  const Tensor &value() const;
  bool tracked() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  std::size_t size() const { return value().size(); }
  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape *tape, int id) : tape_(tape), id_(id) {}
  Tape *tape_ = nullptr;
  int id_ = -1;
};

/// Extra operands of an op: slice range, embedding row, target class or scale.
struct OpArgs {
  std::size_t begin = 0;
  std::size_t length = 0;
  std::size_t index = 0;
  double scalar = 1.0;
};

/// Backward rule of a custom op: given d(loss)/d(output), add the input
/// gradients into in_grads (same order as the inputs; null when untracked).
using CustomBackward =
    std::function<void(const Tensor &out_grad, std::span<Tensor *const> in_grads)>;

class Tape {
 public:
  /// With grad disabled parameters enter as untracked constants and no
  /// backward information is kept (inference mode).
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Tensor value);
  Var Param(Parameter &p);

  /// Generic entry point; the free functions below are thin wrappers.
  /// Throws narb::Error naming the op and the offending shapes.
  Var Apply(OpKind kind, std::span<const Var> inputs, const OpArgs &args = {});

  /// Records an op with a user supplied value and backward rule.
  Var Custom(Tensor value, std::vector<Var> inputs, CustomBackward backward);

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape once in reverse.
  void Backward(Var loss);

  const Tensor &ValueOf(int id) const;
  bool TrackedOf(int id) const { return nodes_[static_cast<std::size_t>(id)].tracked; }
  /// Gradient held by an intermediate node after Backward (empty if none).
  const Tensor &GradOf(Var v) const;
  std::size_t size() const { return nodes_.size(); }
  bool grad_enabled() const { return grad_enabled_; }

 private:
  struct Node {
    OpKind op = OpKind::kLeaf;
    Tensor value;
    const Tensor *ext_value = nullptr;
    Tensor grad;
    Tensor *ext_grad = nullptr;
    std::vector<int> in;
    OpArgs args;
    Tensor aux;
    bool tracked = false;
    CustomBackward custom;
  };

  Var Push(Node node);
  Tensor *GradBuffer(int id);
  void BackwardNode(Node &node, const Tensor &g);

  std::vector<Node> nodes_;
  bool grad_enabled_;
};

// Ops ----------------------------------------------------------------------

Var Matmul(Var a, Var b);
Var Add(Var a, Var b);
Var Mul(Var a, Var b);
Var Concat(std::initializer_list<Var> parts);
Var Concat(std::span<const Var> parts);
Var Slice(Var a, std::size_t begin, std::size_t length);
Var Relu(Var a);
Var Sigmoid(Var a);
Var Tanh(Var a);
/// Row `index` of the table as a column vector.
Var EmbedLookup(Var table, std::size_t index);
/// -log softmax(logits)[target]; a scalar.
Var SoftmaxCrossEntropy(Var logits, std::size_t target);
Var Sum(Var a);
Var Scale(Var a, double s);
Var Softmax(Var a);
/// Column vectors of equal length stacked as the rows of a matrix.
Var Stack(std::span<const Var> rows);
Var Transpose(Var a);

// Numerically stable helpers on plain tensors.
std::vector<double> SoftmaxOf(std::span<const double> logits);
std::vector<double> LogSoftmaxOf(std::span<const double> logits);

// Gradient check -------------------------------------------------------------

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Builds the scalar loss on a fresh tape each call.
using LossFn = std::function<Var(Tape &)>;

/// Compares backward() gradients of every parameter element against central
/// differences (f(t+h) - f(t-h)) / 2h. Error per element is
/// |a - b| / max(|a|, |b|, 1e-8). Throws narb::Error on a non-finite loss.
GradCheckResult GradCheck(const LossFn &f, ParameterSet &params, double h);
GradCheckResult GradCheck(const LossFn &f, std::span<Parameter *const> params, double h);

// Optimizer ------------------------------------------------------------------

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Step() consumes Parameter::grad and zeroes it.
class Adam {
 public:
  Adam(ParameterSet &params, AdamConfig cfg = {});

  /// Throws narb::Error naming the parameter on a non-finite gradient,
  /// before any parameter is touched.
  void Step();
  std::int64_t step() const { return step_; }
  const AdamConfig &config() const { return cfg_; }

 private:
  std::vector<Parameter *> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamConfig cfg_;
  std::int64_t step_ = 0;
};

// Checkpoints ----------------------------------------------------------------

/// Binary little-endian file: "NARB", u32 version, then per parameter
/// u32 name length, name bytes, u32 ndim, u32 dims[ndim], f64 values.
void SaveCheckpoint(const std::string &path, const ParameterSet &params);

/// Reads a checkpoint into an existing set; names and shapes must match
/// exactly (missing or extra records throw).
void LoadCheckpoint(const std::string &path, ParameterSet &params);

/// Raw record reader, for tools that inspect a checkpoint.
struct CheckpointRecord {
  std::string name;
  Tensor value;
};
std::vector<CheckpointRecord> ReadCheckpoint(const std::string &path);
void WriteCheckpoint(const std::string &path, const std::vector<CheckpointRecord> &records);

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace narb::ad

#endif  // NARB_AUTODIFF_H_
