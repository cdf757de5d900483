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

#ifndef WAGAN_METRICS_HPP_
#define WAGAN_METRICS_HPP_

// Evaluation scores: relative extremal-coefficient error between two angular
// samples, and the exact 2-Wasserstein distance between point clouds solved
// as a transportation problem with the network simplex method.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wagan/angular.hpp"

namespace wagan {

struct TransportPlan {
  Matrix plan;  // n_G x n_T, rows sum to a, columns to b
  double objective = 0.0;
  // Dual certificate: cost(i, j) - u_i - v_j >= 0, with equality wherever
  // plan(i, j) > 0.
  Vector dual_source;
  Vector dual_target;
  std::size_t pivots = 0;
};

// Exact optimal transport between discrete measures a and b for the given
// cost matrix. Uniform weights are scaled to integer masses through
// lcm(n_G, n_T) so the simplex runs on exact flows. Throws DomainError when a
// weight vector does not sum to 1 within 1e-9, and NumericalError if the
// final complementary-slackness check fails.
TransportPlan ot_solve(const Matrix& cost, const Vector& a, const Vector& b);

// Squared Euclidean costs between the rows of A and B.
Matrix squared_distance_matrix(const Matrix& A, const Matrix& B);

// sqrt of the optimal transport cost with squared Euclidean ground cost and
// uniform weights on the rows of A and B.
double w2_distance(const Matrix& A, const Matrix& B);

struct SubsetCoefficient {
  std::vector<int> subset;  // 0-based
  double generated = 0.0;
  double reference = 0.0;
};

struct DependenceScore {
  double value = 0.0;
  int order = 2;
  bool sampled = false;
  std::vector<SubsetCoefficient> coefficients;
};

// Mean over subsets J with |J| = order of |1 - theta_J(generated) /
// theta_J(reference)|. Subsets follow enumerate_subsets(d, order, cap, seed).
DependenceScore dependence_score(const AngularSample& generated,
                                 const AngularSample& reference, int order,
                                 std::size_t cap = kDefaultSubsetCap,
                                 std::uint64_t seed = 0);

}  // namespace wagan

#endif  // WAGAN_METRICS_HPP_
