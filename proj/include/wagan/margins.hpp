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

#ifndef WAGAN_MARGINS_HPP_
#define WAGAN_MARGINS_HPP_

// Marginal machinery: rank-based standardization to unit-Pareto margins,
// maximum likelihood for the generalized Pareto distribution (GPD), and the
// two-branch map from the unit-Pareto scale back to the data scale.

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace wagan {

using Matrix = Eigen::MatrixXd;

// Below this |xi| the GPD uses its exponential (xi -> 0) limit.
inline constexpr double kXiZeroThreshold = 1e-8;
inline constexpr double kXiMin = -0.95;
inline constexpr double kXiMax = 5.0;
inline constexpr std::size_t kMinExcesses = 10;

// V_ij = 1 / (1 - F_j(X_ij)) with F_j(x) = #{X_.j <= x} / (n + 1).
// Tied values are ranked by row index and a warning is emitted.
Matrix pareto_standardize(const Matrix& data);

struct GpdParams {
  double sigma = 1.0;
  double xi = 0.0;
};

// log h(y) for h the GPD density (1/sigma)(1 + xi y / sigma)^(-1/xi - 1);
// -inf outside the support.
double gpd_log_density(double y, double sigma, double xi);
double gpd_log_likelihood(std::span<const double> excesses, double sigma,
                          double xi);
// H^{-1}(p) = sigma ((1 - p)^(-xi) - 1) / xi.
double gpd_quantile(double p, double sigma, double xi);

// Maximum likelihood fit. The profile likelihood over a grid of xi values in
// [kXiMin, kXiMax] picks a starting point (each profile point maximizes over
// log sigma), which Nelder-Mead then polishes in (log sigma, xi).
// Throws DomainError for fewer than kMinExcesses values, non-positive values
// or an all-equal sample.
GpdParams gpd_fit(std::span<const double> excesses);

struct MarginFit {
  double threshold = 0.0;  // X_{n-k2:n}
  double sigma = 1.0;
  double xi = 0.0;
  std::vector<double> sorted;  // ascending order statistics, length n
};

struct GpdFitSet {
  std::vector<MarginFit> margins;
  std::size_t n = 0;
  std::size_t k2 = 0;

  std::size_t dim() const { return margins.size(); }
};

// Thresholds u_j = X_{n-k2:n,j} and GPD fits of the excesses above them.
GpdFitSet fit_margins(const Matrix& data, std::size_t k2);

// The estimator of b_j((n/k2) y):
//   y <= 1: X_{(ceil(n - k2/y) v 1):n}
//   y >  1: u + sigma (y^xi - 1) / xi   (sigma log y when |xi| < 1e-8)
double back_transform(double y, const MarginFit& margin, std::size_t k2);

// 1-based order-statistic index used by the first branch, clamped to [1, n].
std::size_t order_statistic_index(double y, std::size_t n, std::size_t k2);

}  // namespace wagan

#endif  // WAGAN_MARGINS_HPP_
