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

#ifndef WAGAN_DATAGEN_HPP_
#define WAGAN_DATAGEN_HPP_

// Seeded synthetic data with logistic (Gumbel copula) extremal dependence and
// Pareto margins, plus an exact sampler of the logistic angular measure.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <random>

namespace wagan {

using Matrix = Eigen::MatrixXd;

struct LogisticConfig {
  int d = 2;
  double theta = 2.0;  // >= 1; 1 is independence
  double alpha = 2.0;  // Pareto tail index, > 0
  std::size_t n = 1000;
  std::uint64_t seed = 0;

  // Throws ConfigError for theta < 1, alpha <= 0, d < 2 or n == 0.
  void validate() const;
};

// n x d matrix with Gumbel(theta) copula and margins P(X > x) = x^-alpha on
// x >= 1. Copula draws use the positive-stable frailty S of index 1/theta:
// U_j = exp(-(E_j / S)^(1/theta)) with E_j iid standard exponential.
Matrix sample_logistic(const LogisticConfig& config);

// One draw with Laplace transform E exp(-t S) = exp(-t^index), 0 < index <= 1
// (Kanter's representation; index 1 is the point mass at 1).
double sample_positive_stable(double index, std::mt19937_64& rng);

// theta_J = |J|^(1/theta) of the logistic model.
double true_extremal_coefficient(double theta, int subset_size);

// `count` exact draws (rows) from the L1 angular measure of the logistic
// model with theta > 1: pick j uniformly, draw E_j ~ Gamma(1 - 1/theta) and
// the other E_i ~ Exp(1), and normalize Y_i = E_i^(-1/theta).
Matrix sample_logistic_angles(int d, double theta, std::size_t count,
                              std::uint64_t seed);

}  // namespace wagan

#endif  // WAGAN_DATAGEN_HPP_
