// Copyright 2026 The wagan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WAGAN_AUTODIFF_HPP_
#define WAGAN_AUTODIFF_HPP_

// Reverse-mode differentiation over dense matrix computation graphs.
//
// A Tape records every operation as a node (op kind, parent indices, cached
// value). Parents always precede their children, so a reverse sweep over
// node indices visits a node only after all its consumers. Backward rules
// are themselves expressed as tape operations; when `create_graph` is set
// they are recorded with gradient tracking and can be differentiated again,
// which is what the gradient penalty of a WGAN critic needs.
//
// The op set is deliberately small: affine layers, leaky-ReLU, row softmax,
// sums/means, row L2 norms, elementwise arithmetic and scalar powers. No
// implicit broadcasting; the broadcast ops are explicit nodes.

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wagan::ad {

using Matrix = Eigen::MatrixXd;

// Misuse of the graph itself: non-scalar backward outputs, operands from
// different tapes, differentiating through an untracked gradient.
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Op : std::uint8_t {
  kLeaf,
  kMatMul,
  kTranspose,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddScalar,
  kPow,
  kLeakyRelu,
  kLeakyReluGrad,  // g * slope(x); parents (g, x)
  kSafeReciprocal,  // 1/x, with 0 where x == 0
  kSum,
  kSumRows,  // n x k -> 1 x k
  kSumCols,  // n x k -> n x 1
  kBroadcastScalar,
  kBroadcastRows,  // 1 x k -> n x k
  kBroadcastCols,  // n x 1 -> n x k
  kAddRowVector,  // (n x k) + (1 x k) on every row
  kSoftmaxRows,
  kRowNorm,  // n x k -> n x 1, Euclidean norm of each row
};

std::string_view op_name(Op op);

struct Node {
  Op op = Op::kLeaf;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  double attr = 0.0;
  Eigen::Index rows = 0;  // target shape of broadcast ops
  Eigen::Index cols = 0;
  Matrix value;
  bool requires_grad = false;
  // Produced by a backward pass that did not record a differentiable graph.
  bool detached_grad = false;
};

class Tape;

// Lightweight handle to a node on a tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::int32_t index) : tape_(tape), index_(index) {}

  Tape* tape() const { return tape_; }
  std::int32_t index() const { return index_; }
  bool valid() const { return tape_ != nullptr && index_ >= 0; }

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;
  bool requires_grad() const;

 private:
  Tape* tape_ = nullptr;
  std::int32_t index_ = -1;
};

// Gradients keyed by leaf node index.
using Gradients = std::unordered_map<std::int32_t, Var>;

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Matrix value, bool requires_grad = false);
  Var constant(Matrix value) { return leaf(std::move(value), false); }
  Var scalar(double value, bool requires_grad = false);

  // Records `op` applied to the given parents and computes its value.
  // Throws ShapeError when the operand shapes do not conform.
  Var record(Op op, Var lhs, Var rhs = {}, double attr = 0.0,
             Eigen::Index rows = 0, Eigen::Index cols = 0);

  // d(output)/d(leaf) for every requires_grad leaf reachable from output.
  Gradients backward(Var output, bool create_graph = false);

  // d(output)/d(x) for each x in `wrt`; unreached inputs get zero constants.
  std::vector<Var> grad(Var output, std::span<const Var> wrt,
                        bool create_graph = false);

  // Recomputes every non-leaf value from the leaves, in tape order.
  void replay();
  void set_leaf_value(Var leaf, Matrix value);

  const Node& node(std::int32_t index) const { return nodes_.at(index); }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  Var push(Node node);
  Matrix evaluate(const Node& node) const;
  void check_shapes(const Node& node) const;
  std::vector<std::int32_t> adjoints(Var output, bool create_graph);
  void accumulate(std::vector<std::int32_t>& adjoint, std::int32_t target,
                  Var contribution);
  void propagate(std::int32_t index, Var g,
                 std::vector<std::int32_t>& adjoint);

  std::vector<Node> nodes_;
  bool recording_ = true;
};

// Graph-building operations. All operands must live on the same tape.
Var matmul(Var a, Var b);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var add_scalar(Var a, double c);
Var pow(Var a, double exponent);
Var square(Var a);
Var leaky_relu(Var a, double alpha);
Var leaky_relu_grad(Var g, Var x, double alpha);
Var safe_reciprocal(Var a);
Var sum(Var a);
Var mean(Var a);
Var sum_rows(Var a);
Var sum_cols(Var a);
Var broadcast_scalar(Var a, Eigen::Index rows, Eigen::Index cols);
Var broadcast_rows(Var a, Eigen::Index rows);
Var broadcast_cols(Var a, Eigen::Index cols);
Var add_row_vector(Var a, Var row);
Var softmax_rows(Var a);
Var row_norm(Var a);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(double c, Var a) { return scale(a, c); }

// Scalar leaky-ReLU: x for x >= 0, alpha * x otherwise.
inline double leaky_relu(double x, double alpha) {
  return x >= 0.0 ? x : alpha * x;
}

}  // namespace wagan::ad

#endif  // WAGAN_AUTODIFF_HPP_
