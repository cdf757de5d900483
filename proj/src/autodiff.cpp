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

#include "wagan/autodiff.hpp"

#include <cmath>
#include <string>

#include "wagan/error.hpp"

namespace wagan::ad {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void shape_mismatch(Op op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op_name(op)) + ": operand shapes " +
                   shape_of(a) + " and " + shape_of(b) + " do not conform");
}

double slope(double x, double alpha) { return x >= 0.0 ? 1.0 : alpha; }

// Restores the recording flag when a backward pass exits.
class RecordingGuard {
 public:
  RecordingGuard(bool& flag, bool value) : flag_(flag), saved_(flag) {
    flag_ = value;
  }
  ~RecordingGuard() { flag_ = saved_; }
  RecordingGuard(const RecordingGuard&) = delete;
  RecordingGuard& operator=(const RecordingGuard&) = delete;

 private:
  bool& flag_;
  bool saved_;
};

}  // namespace

std::string_view op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kMatMul: return "matmul";
    case Op::kTranspose: return "transpose";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kScale: return "scale";
    case Op::kAddScalar: return "add_scalar";
    case Op::kPow: return "pow";
    case Op::kLeakyRelu: return "leaky_relu";
    case Op::kLeakyReluGrad: return "leaky_relu_grad";
    case Op::kSafeReciprocal: return "safe_reciprocal";
    case Op::kSum: return "sum";
    case Op::kSumRows: return "sum_rows";
    case Op::kSumCols: return "sum_cols";
    case Op::kBroadcastScalar: return "broadcast_scalar";
    case Op::kBroadcastRows: return "broadcast_rows";
    case Op::kBroadcastCols: return "broadcast_cols";
    case Op::kAddRowVector: return "add_row_vector";
    case Op::kSoftmaxRows: return "softmax_rows";
    case Op::kRowNorm: return "row_norm";
  }
  return "unknown";
}

const Matrix& Var::value() const { return tape_->node(index_).value; }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw ShapeError("scalar(): node has shape " + shape_of(v));
  }
  return v(0, 0);
}

bool Var::requires_grad() const { return tape_->node(index_).requires_grad; }

Var Tape::leaf(Matrix value, bool requires_grad) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  return push(std::move(n));
}

Var Tape::scalar(double value, bool requires_grad) {
  return leaf(Matrix::Constant(1, 1, value), requires_grad);
}

Var Tape::push(Node node) {
  if (!recording_) {
    node.requires_grad = false;
    node.detached_grad = true;
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::record(Op op, Var lhs, Var rhs, double attr, Eigen::Index rows,
                 Eigen::Index cols) {
  if (lhs.tape() != this || (rhs.valid() && rhs.tape() != this)) {
    throw GraphError(std::string(op_name(op)) +
                     ": operands belong to a different tape");
  }
  Node n;
  n.op = op;
  n.lhs = lhs.index();
  n.rhs = rhs.valid() ? rhs.index() : -1;
  n.attr = attr;
  n.rows = rows;
  n.cols = cols;
  n.requires_grad = nodes_[n.lhs].requires_grad ||
                    (n.rhs >= 0 && nodes_[n.rhs].requires_grad);
  check_shapes(n);
  n.value = evaluate(n);
  return push(std::move(n));
}

void Tape::check_shapes(const Node& n) const {
  const Matrix& a = nodes_[n.lhs].value;
  switch (n.op) {
    case Op::kMatMul: {
      const Matrix& b = nodes_[n.rhs].value;
      if (a.cols() != b.rows()) shape_mismatch(n.op, a, b);
      break;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kLeakyReluGrad: {
      const Matrix& b = nodes_[n.rhs].value;
      if (a.rows() != b.rows() || a.cols() != b.cols()) {
        shape_mismatch(n.op, a, b);
      }
      break;
    }
    case Op::kAddRowVector: {
      const Matrix& b = nodes_[n.rhs].value;
      if (b.rows() != 1 || a.cols() != b.cols()) shape_mismatch(n.op, a, b);
      break;
    }
    case Op::kBroadcastScalar:
      if (a.rows() != 1 || a.cols() != 1) {
        throw ShapeError("broadcast_scalar: expected 1x1 operand, got " +
                         shape_of(a));
      }
      break;
    case Op::kBroadcastRows:
      if (a.rows() != 1) {
        throw ShapeError("broadcast_rows: expected a row vector, got " +
                         shape_of(a));
      }
      break;
    case Op::kBroadcastCols:
      if (a.cols() != 1) {
        throw ShapeError("broadcast_cols: expected a column vector, got " +
                         shape_of(a));
      }
      break;
    default:
      break;
  }
}

Matrix Tape::evaluate(const Node& n) const {
  if (n.op == Op::kLeaf) return n.value;
  const Matrix& a = nodes_[n.lhs].value;
  switch (n.op) {
    case Op::kLeaf:
      return n.value;
    case Op::kMatMul:
      return a * nodes_[n.rhs].value;
    case Op::kTranspose:
      return a.transpose();
    case Op::kAdd:
      return a + nodes_[n.rhs].value;
    case Op::kSub:
      return a - nodes_[n.rhs].value;
    case Op::kMul:
      return a.cwiseProduct(nodes_[n.rhs].value);
    case Op::kScale:
      return n.attr * a;
    case Op::kAddScalar:
      return (a.array() + n.attr).matrix();
    case Op::kPow:
      return a.array().pow(n.attr).matrix();
    case Op::kLeakyRelu: {
      const double alpha = n.attr;
      return a.unaryExpr([alpha](double x) { return leaky_relu(x, alpha); });
    }
    case Op::kLeakyReluGrad: {
      const double alpha = n.attr;
      const Matrix& x = nodes_[n.rhs].value;
      return a.cwiseProduct(
          x.unaryExpr([alpha](double v) { return slope(v, alpha); }));
    }
    case Op::kSafeReciprocal:
      return a.unaryExpr([](double x) { return x == 0.0 ? 0.0 : 1.0 / x; });
    case Op::kSum:
      return Matrix::Constant(1, 1, a.sum());
    case Op::kSumRows:
      return a.colwise().sum();
    case Op::kSumCols:
      return a.rowwise().sum();
    case Op::kBroadcastScalar:
      return Matrix::Constant(n.rows, n.cols, a(0, 0));
    case Op::kBroadcastRows:
      return a.replicate(n.rows, 1);
    case Op::kBroadcastCols:
      return a.replicate(1, n.cols);
    case Op::kAddRowVector:
      return a.rowwise() + nodes_[n.rhs].value.row(0);
    case Op::kSoftmaxRows: {
      Matrix out(a.rows(), a.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double shift = a.row(i).maxCoeff();
        out.row(i) = (a.row(i).array() - shift).exp().matrix();
        out.row(i) /= out.row(i).sum();
      }
      return out;
    }
    case Op::kRowNorm:
      return a.rowwise().norm();
  }
  return {};
}

void Tape::set_leaf_value(Var leaf, Matrix value) {
  Node& n = nodes_.at(leaf.index());
  if (n.op != Op::kLeaf) {
    throw GraphError("set_leaf_value: node is not a leaf");
  }
  if (n.value.rows() != value.rows() || n.value.cols() != value.cols()) {
    throw ShapeError("set_leaf_value: new value has shape " +
                     shape_of(value) + ", leaf has " + shape_of(n.value));
  }
  n.value = std::move(value);
}

void Tape::replay() {
  for (Node& n : nodes_) {
    if (n.op != Op::kLeaf) n.value = evaluate(n);
  }
}

void Tape::accumulate(std::vector<std::int32_t>& adjoint, std::int32_t target,
                      Var contribution) {
  if (adjoint[target] < 0) {
    adjoint[target] = contribution.index();
  } else {
    adjoint[target] = add(Var(this, adjoint[target]), contribution).index();
  }
}

void Tape::propagate(std::int32_t index, Var g,
                     std::vector<std::int32_t>& adjoint) {
  // Copy out: recording new nodes may reallocate nodes_.
  const Op op = nodes_[index].op;
  const std::int32_t lhs = nodes_[index].lhs;
  const std::int32_t rhs = nodes_[index].rhs;
  const double attr = nodes_[index].attr;
  const Var a(this, lhs);
  const Var b(this, rhs);
  const Var y(this, index);
  const bool need_a = lhs >= 0 && nodes_[lhs].requires_grad;
  const bool need_b = rhs >= 0 && nodes_[rhs].requires_grad;
  const Eigen::Index a_rows = lhs >= 0 ? nodes_[lhs].value.rows() : 0;
  const Eigen::Index a_cols = lhs >= 0 ? nodes_[lhs].value.cols() : 0;

  switch (op) {
    case Op::kLeaf:
      break;
    case Op::kMatMul:
      if (need_a) accumulate(adjoint, lhs, matmul(g, transpose(b)));
      if (need_b) accumulate(adjoint, rhs, matmul(transpose(a), g));
      break;
    case Op::kTranspose:
      if (need_a) accumulate(adjoint, lhs, transpose(g));
      break;
    case Op::kAdd:
      if (need_a) accumulate(adjoint, lhs, g);
      if (need_b) accumulate(adjoint, rhs, g);
      break;
    case Op::kSub:
      if (need_a) accumulate(adjoint, lhs, g);
      if (need_b) accumulate(adjoint, rhs, scale(g, -1.0));
      break;
    case Op::kMul:
      if (need_a) accumulate(adjoint, lhs, mul(g, b));
      if (need_b) accumulate(adjoint, rhs, mul(g, a));
      break;
    case Op::kScale:
      if (need_a) accumulate(adjoint, lhs, scale(g, attr));
      break;
    case Op::kAddScalar:
      if (need_a) accumulate(adjoint, lhs, g);
      break;
    case Op::kPow:
      if (need_a) {
        accumulate(adjoint, lhs, mul(g, scale(pow(a, attr - 1.0), attr)));
      }
      break;
    case Op::kLeakyRelu:
      if (need_a) accumulate(adjoint, lhs, leaky_relu_grad(g, a, attr));
      break;
    case Op::kLeakyReluGrad:
      // The slope mask is piecewise constant in x: no contribution to x.
      if (need_a) accumulate(adjoint, lhs, leaky_relu_grad(g, b, attr));
      break;
    case Op::kSafeReciprocal:
      if (need_a) accumulate(adjoint, lhs, mul(g, scale(mul(y, y), -1.0)));
      break;
    case Op::kSum:
      if (need_a) accumulate(adjoint, lhs, broadcast_scalar(g, a_rows, a_cols));
      break;
    case Op::kSumRows:
      if (need_a) accumulate(adjoint, lhs, broadcast_rows(g, a_rows));
      break;
    case Op::kSumCols:
      if (need_a) accumulate(adjoint, lhs, broadcast_cols(g, a_cols));
      break;
    case Op::kBroadcastScalar:
      if (need_a) accumulate(adjoint, lhs, sum(g));
      break;
    case Op::kBroadcastRows:
      if (need_a) accumulate(adjoint, lhs, sum_rows(g));
      break;
    case Op::kBroadcastCols:
      if (need_a) accumulate(adjoint, lhs, sum_cols(g));
      break;
    case Op::kAddRowVector:
      if (need_a) accumulate(adjoint, lhs, g);
      if (need_b) accumulate(adjoint, rhs, sum_rows(g));
      break;
    case Op::kSoftmaxRows:
      if (need_a) {
        const Var inner = broadcast_cols(sum_cols(mul(g, y)), a_cols);
        accumulate(adjoint, lhs, mul(y, sub(g, inner)));
      }
      break;
    case Op::kRowNorm:
      if (need_a) {
        const Var coef = broadcast_cols(mul(g, safe_reciprocal(y)), a_cols);
        accumulate(adjoint, lhs, mul(coef, a));
      }
      break;
  }
}

std::vector<std::int32_t> Tape::adjoints(Var output, bool create_graph) {
  if (output.tape() != this || output.index() < 0) {
    throw GraphError("backward: output belongs to a different tape");
  }
  const Matrix& out_value = nodes_[output.index()].value;
  if (out_value.rows() != 1 || out_value.cols() != 1) {
    throw GraphError("backward: output must be scalar, got shape " +
                     shape_of(out_value));
  }

  const std::int32_t out = output.index();
  std::vector<char> reached(static_cast<std::size_t>(out) + 1, 0);
  reached.back() = 1;
  for (std::int32_t i = out; i >= 0; --i) {
    if (!reached[i]) continue;
    const Node& n = nodes_[i];
    if (n.detached_grad) {
      throw GraphError(
          "backward: graph contains a gradient computed without "
          "create_graph; recompute it with create_graph = true");
    }
    if (n.lhs >= 0) reached[n.lhs] = 1;
    if (n.rhs >= 0) reached[n.rhs] = 1;
  }

  RecordingGuard guard(recording_, create_graph);
  std::vector<std::int32_t> adjoint(static_cast<std::size_t>(out) + 1, -1);
  if (!nodes_[out].requires_grad) return adjoint;
  adjoint[out] = leaf(Matrix::Ones(1, 1)).index();
  for (std::int32_t i = out; i >= 0; --i) {
    if (adjoint[i] < 0 || !nodes_[i].requires_grad) continue;
    propagate(i, Var(this, adjoint[i]), adjoint);
  }
  return adjoint;
}

Gradients Tape::backward(Var output, bool create_graph) {
  const std::vector<std::int32_t> adjoint = adjoints(output, create_graph);
  Gradients out;
  for (std::size_t i = 0; i < adjoint.size(); ++i) {
    const Node& n = nodes_[i];
    if (adjoint[i] >= 0 && n.op == Op::kLeaf && n.requires_grad) {
      out.emplace(static_cast<std::int32_t>(i), Var(this, adjoint[i]));
    }
  }
  return out;
}

std::vector<Var> Tape::grad(Var output, std::span<const Var> wrt,
                            bool create_graph) {
  const std::vector<std::int32_t> adjoint = adjoints(output, create_graph);
  std::vector<Var> out;
  out.reserve(wrt.size());
  for (const Var& x : wrt) {
    if (x.tape() != this) {
      throw GraphError("grad: input belongs to a different tape");
    }
    const auto i = static_cast<std::size_t>(x.index());
    if (i < adjoint.size() && adjoint[i] >= 0) {
      out.emplace_back(this, adjoint[i]);
    } else {
      const Matrix& v = nodes_[i].value;
      out.push_back(constant(Matrix::Zero(v.rows(), v.cols())));
    }
  }
  return out;
}

Var matmul(Var a, Var b) { return a.tape()->record(Op::kMatMul, a, b); }
Var transpose(Var a) { return a.tape()->record(Op::kTranspose, a); }
Var add(Var a, Var b) { return a.tape()->record(Op::kAdd, a, b); }
Var sub(Var a, Var b) { return a.tape()->record(Op::kSub, a, b); }
Var mul(Var a, Var b) { return a.tape()->record(Op::kMul, a, b); }
Var scale(Var a, double factor) {
  return a.tape()->record(Op::kScale, a, {}, factor);
}
Var add_scalar(Var a, double c) {
  return a.tape()->record(Op::kAddScalar, a, {}, c);
}
Var pow(Var a, double exponent) {
  return a.tape()->record(Op::kPow, a, {}, exponent);
}
Var square(Var a) { return mul(a, a); }
Var leaky_relu(Var a, double alpha) {
  return a.tape()->record(Op::kLeakyRelu, a, {}, alpha);
}
Var leaky_relu_grad(Var g, Var x, double alpha) {
  return g.tape()->record(Op::kLeakyReluGrad, g, x, alpha);
}
Var safe_reciprocal(Var a) {
  return a.tape()->record(Op::kSafeReciprocal, a);
}
Var sum(Var a) { return a.tape()->record(Op::kSum, a); }
Var mean(Var a) {
  return scale(sum(a), 1.0 / static_cast<double>(a.rows() * a.cols()));
}
Var sum_rows(Var a) { return a.tape()->record(Op::kSumRows, a); }
Var sum_cols(Var a) { return a.tape()->record(Op::kSumCols, a); }
Var broadcast_scalar(Var a, Eigen::Index rows, Eigen::Index cols) {
  return a.tape()->record(Op::kBroadcastScalar, a, {}, 0.0, rows, cols);
}
Var broadcast_rows(Var a, Eigen::Index rows) {
  return a.tape()->record(Op::kBroadcastRows, a, {}, 0.0, rows, a.cols());
}
Var broadcast_cols(Var a, Eigen::Index cols) {
  return a.tape()->record(Op::kBroadcastCols, a, {}, 0.0, a.rows(), cols);
}
Var add_row_vector(Var a, Var row) {
  return a.tape()->record(Op::kAddRowVector, a, row);
}
Var softmax_rows(Var a) { return a.tape()->record(Op::kSoftmaxRows, a); }
Var row_norm(Var a) { return a.tape()->record(Op::kRowNorm, a); }

}  // namespace wagan::ad
