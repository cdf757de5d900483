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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wagan/error.hpp"
#include "wagan/metrics.hpp"

namespace wagan {

namespace {

// Primal network simplex on the complete bipartite graph sources -> sinks,
// started from the artificial tree in which every source sends its supply to
// an extra root node (zero cost) and the root feeds every sink through an
// expensive arc. Arcs are uncapacitated, so nonbasic arcs carry no flow and
// only tree arcs store flow (one per non-root node).
//
// The tree is kept as parent pointers. Leaving arcs follow Cunningham's rule
// (last blocking arc in cycle orientation from the join node), which keeps
// the tree strongly feasible and prevents cycling on the heavily degenerate
// assignment-like instances produced by uniform weights. Depths and
// potentials are rebuilt after every pivot.
class TransportSimplex {
 public:
  TransportSimplex(const Matrix& cost, const std::vector<double>& supply,
                   const std::vector<double>& demand)
      : m_(static_cast<int>(supply.size())),
        n_(static_cast<int>(demand.size())),
        root_(m_ + n_),
        nodes_(m_ + n_ + 1),
        real_arcs_(static_cast<std::int64_t>(m_) * n_),
        cost_(static_cast<std::size_t>(real_arcs_)) {
    double max_cost = 0.0;
    for (int s = 0; s < m_; ++s) {
      for (int t = 0; t < n_; ++t) {
        const double c = cost(s, t);
        cost_[static_cast<std::size_t>(s) * n_ + t] = c;
        max_cost = std::max(max_cost, std::abs(c));
      }
    }
    art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_);
    eps_ = 64.0 * std::numeric_limits<double>::epsilon() * art_cost_;

    parent_.assign(nodes_, -1);
    pred_.assign(nodes_, -1);
    up_.assign(nodes_, 0);
    art_up_.assign(nodes_, 0);
    flow_.assign(nodes_, 0.0);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    for (int v = 0; v < root_; ++v) {
      parent_[v] = root_;
      pred_[v] = real_arcs_ + v;
      depth_[v] = 1;
      // Zero-flow tree arcs must point away from the root.
      if (v < m_ && supply[static_cast<std::size_t>(v)] > 0.0) {
        art_up_[v] = 1;
        up_[v] = 1;
        flow_[v] = supply[static_cast<std::size_t>(v)];
        pi_[v] = 0.0;
      } else {
        up_[v] = 0;
        flow_[v] = v < m_ ? 0.0 : demand[static_cast<std::size_t>(v - m_)];
        pi_[v] = art_cost_;
      }
    }
    const std::int64_t total = real_arcs_ + root_;
    block_ = std::max<std::int64_t>(
        10, static_cast<std::int64_t>(std::sqrt(static_cast<double>(total))));
  }

  void run() {
    std::int64_t entering = -1;
    while ((entering = find_entering()) >= 0) {
      pivot(entering);
      ++pivots_;
    }
  }

  double reduced_cost(std::int64_t arc) const {
    return arc_cost(arc) + pi_[source(arc)] - pi_[target(arc)];
  }

  // Flow on real arc (s, t): nonzero only for tree arcs.
  Matrix flows() const {
    Matrix out = Matrix::Zero(m_, n_);
    for (int v = 0; v < root_; ++v) {
      const std::int64_t e = pred_[v];
      if (e < real_arcs_) {
        out(static_cast<Eigen::Index>(e / n_), static_cast<Eigen::Index>(e % n_)) =
            flow_[v];
      }
    }
    return out;
  }

  double artificial_flow() const {
    double acc = 0.0;
    for (int v = 0; v < root_; ++v) {
      if (pred_[v] >= real_arcs_) acc += std::abs(flow_[v]);
    }
    return acc;
  }

  double potential(int node) const { return pi_[node]; }
  std::size_t pivots() const { return pivots_; }

 private:
  int source(std::int64_t arc) const {
    if (arc < real_arcs_) return static_cast<int>(arc / n_);
    const int v = static_cast<int>(arc - real_arcs_);
    return art_up_[v] ? v : root_;
  }
  int target(std::int64_t arc) const {
    if (arc < real_arcs_) return m_ + static_cast<int>(arc % n_);
    const int v = static_cast<int>(arc - real_arcs_);
    return art_up_[v] ? root_ : v;
  }
  double arc_cost(std::int64_t arc) const {
    if (arc < real_arcs_) return cost_[static_cast<std::size_t>(arc)];
    return art_up_[arc - real_arcs_] ? 0.0 : art_cost_;
  }
  bool in_tree(std::int64_t arc) const {
    const int s = source(arc);
    const int t = target(arc);
    return pred_[s] == arc || pred_[t] == arc;
  }

  // Block search: the most negative reduced cost within the first block that
  // contains a candidate; ties keep the lowest arc index in scan order.
  std::int64_t find_entering() {
    const std::int64_t total = real_arcs_ + root_;
    std::int64_t best = -1;
    double best_rc = -eps_;
    std::int64_t scanned_in_block = 0;
    for (std::int64_t k = 0; k < total; ++k) {
      const std::int64_t arc = (next_arc_ + k) % total;
      const double rc = reduced_cost(arc);
      if (rc < best_rc && !in_tree(arc)) {
        best_rc = rc;
        best = arc;
      }
      if (++scanned_in_block == block_) {
        if (best >= 0) {
          next_arc_ = (arc + 1) % total;
          return best;
        }
        scanned_in_block = 0;
      }
    }
    if (best >= 0) next_arc_ = (best + 1) % total;
    return best;
  }

  int find_join(int a, int b) const {
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        a = parent_[a];
      } else {
        b = parent_[b];
      }
    }
    return a;
  }

  void pivot(std::int64_t entering) {
    const int first = source(entering);
    const int second = target(entering);
    const int join = find_join(first, second);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    double delta = kInf;
    int u_out = -1;
    int side = 0;
    for (int x = first; x != join; x = parent_[x]) {
      const double d = up_[x] ? flow_[x] : kInf;
      if (d < delta) {
        delta = d;
        u_out = x;
        side = 1;
      }
    }
    for (int x = second; x != join; x = parent_[x]) {
      const double d = up_[x] ? kInf : flow_[x];
      if (d <= delta) {
        delta = d;
        u_out = x;
        side = 2;
      }
    }
    if (u_out < 0) {
      throw NumericalError("ot_solve: unbounded pivot cycle");
    }

    for (int x = first; x != join; x = parent_[x]) {
      flow_[x] += up_[x] ? -delta : delta;
    }
    for (int x = second; x != join; x = parent_[x]) {
      flow_[x] += up_[x] ? delta : -delta;
    }

    // Hang the cut subtree from the entering arc, reversing the path between
    // its new attachment node and the node whose arc leaves.
    int node = side == 1 ? first : second;
    int new_parent = side == 1 ? second : first;
    std::int64_t arc = entering;
    char up = side == 1 ? 1 : 0;
    double f = delta;
    while (true) {
      const int old_parent = parent_[node];
      const std::int64_t old_arc = pred_[node];
      const char old_up = up_[node];
      const double old_flow = flow_[node];
      parent_[node] = new_parent;
      pred_[node] = arc;
      up_[node] = up;
      flow_[node] = f;
      if (node == u_out) break;
      new_parent = node;
      node = old_parent;
      arc = old_arc;
      up = static_cast<char>(!old_up);
      f = old_flow;
    }
    rebuild();
  }

  // Depths and potentials from the root, with tree arcs at zero reduced cost.
  void rebuild() {
    child_start_.assign(static_cast<std::size_t>(nodes_) + 1, 0);
    for (int v = 0; v < root_; ++v) ++child_start_[parent_[v] + 1];
    for (int v = 0; v < nodes_; ++v) child_start_[v + 1] += child_start_[v];
    children_.resize(static_cast<std::size_t>(root_));
    fill_pos_.assign(child_start_.begin(), child_start_.end() - 1);
    for (int v = 0; v < root_; ++v) children_[fill_pos_[parent_[v]]++] = v;

    queue_.clear();
    queue_.push_back(root_);
    depth_[root_] = 0;
    pi_[root_] = 0.0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const int p = queue_[head];
      for (int c = child_start_[p]; c < child_start_[p + 1]; ++c) {
        const int v = children_[c];
        depth_[v] = depth_[p] + 1;
        const double ac = arc_cost(pred_[v]);
        pi_[v] = up_[v] ? pi_[p] - ac : pi_[p] + ac;
        queue_.push_back(v);
      }
    }
  }

  int m_;
  int n_;
  int root_;
  int nodes_;
  std::int64_t real_arcs_;
  std::vector<double> cost_;
  double art_cost_ = 0.0;
  double eps_ = 0.0;

  std::vector<int> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<char> up_;  // tree arc points from the node to its parent
  std::vector<char> art_up_;  // artificial arc of the node points to the root
  std::vector<double> flow_;
  std::vector<int> depth_;
  std::vector<double> pi_;

  std::vector<int> child_start_;
  std::vector<int> children_;
  std::vector<int> fill_pos_;
  std::vector<int> queue_;

  std::int64_t block_ = 10;
  std::int64_t next_arc_ = 0;
  std::size_t pivots_ = 0;
};

void check_weights(const Vector& w, const char* name) {
  if (w.size() == 0) throw DomainError(std::string(name) + " is empty");
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw DomainError(std::string(name) + " has negative or non-finite entries");
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    throw DomainError(std::string(name) + " sums to " + std::to_string(w.sum()) +
                      ", expected 1 within 1e-9");
  }
}

bool is_uniform(const Vector& w) {
  const double target = 1.0 / static_cast<double>(w.size());
  return ((w.array() - target).abs() <= 1e-15).all();
}

}  // namespace

TransportPlan ot_solve(const Matrix& cost, const Vector& a, const Vector& b) {
  check_weights(a, "source weights");
  check_weights(b, "target weights");
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw ShapeError("ot_solve: cost is " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()) + " but weights have sizes " +
                     std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  }
  if (!cost.allFinite()) throw DomainError("ot_solve: non-finite cost");

  const auto m = static_cast<std::size_t>(a.size());
  const auto n = static_cast<std::size_t>(b.size());
  std::vector<double> supply(m);
  std::vector<double> demand(n);
  double mass = 1.0;
  if (is_uniform(a) && is_uniform(b)) {
    const std::size_t l = std::lcm(m, n);
    mass = static_cast<double>(l);
    std::fill(supply.begin(), supply.end(), static_cast<double>(l / m));
    std::fill(demand.begin(), demand.end(), static_cast<double>(l / n));
  } else {
    for (std::size_t i = 0; i < m; ++i) supply[i] = a[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < n; ++j) demand[j] = b[static_cast<Eigen::Index>(j)];
  }

  TransportSimplex simplex(cost, supply, demand);
  simplex.run();

  if (simplex.artificial_flow() > 1e-9 * mass) {
    throw NumericalError("ot_solve: artificial arcs still carry flow");
  }

  TransportPlan out;
  out.plan = simplex.flows() / mass;
  out.pivots = simplex.pivots();
  out.objective = cost.cwiseProduct(out.plan).sum();
  out.dual_source.resize(a.size());
  out.dual_target.resize(b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.dual_source[i] = -simplex.potential(static_cast<int>(i));
  }
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    out.dual_target[j] = simplex.potential(static_cast<int>(m) + static_cast<int>(j));
  }

  // Complementary slackness certificate.
  const double tol = 1e-7 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      const double rc = cost(i, j) - out.dual_source[i] - out.dual_target[j];
      if (rc < -tol || (out.plan(i, j) > 0.0 && std::abs(rc) > tol)) {
        throw NumericalError("ot_solve: optimality certificate failed at (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             "), reduced cost " + std::to_string(rc));
      }
    }
  }
  return out;
}

Matrix squared_distance_matrix(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.cols()) {
    throw ShapeError("point sets have dimensions " + std::to_string(A.cols()) +
                     " and " + std::to_string(B.cols()));
  }
  Matrix out(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      out(i, j) = (A.row(i) - B.row(j)).squaredNorm();
    }
  }
  return out;
}

double w2_distance(const Matrix& A, const Matrix& B) {
  if (A.rows() == 0 || B.rows() == 0) {
    throw DomainError("w2_distance: empty point set");
  }
  const Matrix cost = squared_distance_matrix(A, B);
  const Vector a = Vector::Constant(A.rows(), 1.0 / static_cast<double>(A.rows()));
  const Vector b = Vector::Constant(B.rows(), 1.0 / static_cast<double>(B.rows()));
  return std::sqrt(std::max(0.0, ot_solve(cost, a, b).objective));
}

}  // namespace wagan
