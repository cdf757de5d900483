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

#include "wagan/margins.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wagan/error.hpp"
#include "wagan/log.hpp"
#include "wagan/optimize.hpp"

namespace wagan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kProfileGridSize = 120;

bool xi_is_zero(double xi) { return std::abs(xi) < kXiZeroThreshold; }

// Best log sigma for a fixed xi, by Brent's method on a bracket that keeps
// every excess inside the support.
double profile_log_sigma(std::span<const double> y, double xi, double y_max,
                         double y_mean) {
  double lo = std::log(1e-8 * y_mean);
  if (xi < 0.0) lo = std::max(lo, std::log(-xi * y_max) + 1e-12);
  const double hi = std::log(1e3 * y_max) + std::max(0.0, xi) * 2.0;
  if (!(lo < hi)) return hi;
  auto negll = [&](double s) {
    const double ll = gpd_log_likelihood(y, std::exp(s), xi);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
  };
  return boost::math::tools::brent_find_minima(negll, lo, hi, 50).first;
}

}  // namespace

Matrix pareto_standardize(const Matrix& data) {
  const Eigen::Index n = data.rows();
  if (n < 2) {
    throw DomainError("pareto_standardize needs at least 2 rows, got " +
                      std::to_string(n));
  }
  Matrix out(n, data.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  const double denom = static_cast<double>(n) + 1.0;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return data(a, j) < data(b, j);
                     });
    std::size_t ties = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (r > 0 && data(order[r], j) == data(order[r - 1], j)) ++ties;
      const double rank = static_cast<double>(r + 1);
      out(order[r], j) = denom / (denom - rank);
    }
    if (ties > 0) {
      log::warn("column " + std::to_string(j + 1) + " has " +
                std::to_string(ties) +
                " tied values; ties are ranked by row order");
    }
  }
  return out;
}

double gpd_log_density(double y, double sigma, double xi) {
  if (!(sigma > 0.0) || y < 0.0) return kNegInf;
  if (xi_is_zero(xi)) return -std::log(sigma) - y / sigma;
  const double z = 1.0 + xi * y / sigma;
  if (!(z > 0.0)) return kNegInf;
  return -std::log(sigma) - (1.0 / xi + 1.0) * std::log(z);
}

double gpd_log_likelihood(std::span<const double> excesses, double sigma,
                          double xi) {
  if (!(sigma > 0.0)) return kNegInf;
  double acc = 0.0;
  for (double y : excesses) {
    const double lp = gpd_log_density(y, sigma, xi);
    if (lp == kNegInf) return kNegInf;
    acc += lp;
  }
  return acc;
}

double gpd_quantile(double p, double sigma, double xi) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw DomainError("gpd_quantile: probability must lie in [0, 1), got " +
                      std::to_string(p));
  }
  if (xi_is_zero(xi)) return -sigma * std::log1p(-p);
  return sigma * (std::pow(1.0 - p, -xi) - 1.0) / xi;
}

GpdParams gpd_fit(std::span<const double> excesses) {
  if (excesses.size() < kMinExcesses) {
    throw DomainError("gpd_fit needs at least " +
                      std::to_string(kMinExcesses) + " excesses, got " +
                      std::to_string(excesses.size()));
  }
  double y_max = 0.0;
  double y_min = std::numeric_limits<double>::infinity();
  double y_sum = 0.0;
  for (double y : excesses) {
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw DomainError("gpd_fit: excesses must be finite and positive");
    }
    y_max = std::max(y_max, y);
    y_min = std::min(y_min, y);
    y_sum += y;
  }
  if (y_max == y_min) {
    throw DomainError("gpd_fit: all excesses are equal (degenerate likelihood)");
  }
  const double y_mean = y_sum / static_cast<double>(excesses.size());

  double best_ll = kNegInf;
  GpdParams best{y_mean, 0.0};
  for (int g = 0; g <= kProfileGridSize; ++g) {
    const double xi =
        kXiMin + (kXiMax - kXiMin) * static_cast<double>(g) / kProfileGridSize;
    const double s = profile_log_sigma(excesses, xi, y_max, y_mean);
    const double ll = gpd_log_likelihood(excesses, std::exp(s), xi);
    if (ll > best_ll) {
      best_ll = ll;
      best = {std::exp(s), xi};
    }
  }
  // The exponential limit is not on the grid.
  const double ll_exp = gpd_log_likelihood(excesses, y_mean, 0.0);
  if (ll_exp > best_ll) {
    best_ll = ll_exp;
    best = {y_mean, 0.0};
  }
  if (!std::isfinite(best_ll)) {
    throw NumericalError("gpd_fit: no feasible starting point found");
  }

  auto objective = [&](const Eigen::VectorXd& p) {
    if (p[1] < kXiMin || p[1] > kXiMax) {
      return std::numeric_limits<double>::infinity();
    }
    const double ll = gpd_log_likelihood(excesses, std::exp(p[0]), p[1]);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  NelderMeadOptions options;
  options.initial_step = 0.05;
  options.tolerance = 1e-14;
  const NelderMeadResult polished =
      nelder_mead(objective, Eigen::Vector2d(std::log(best.sigma), best.xi),
                  options);
  if (std::isfinite(polished.value) && -polished.value >= best_ll) {
    best = {std::exp(polished.x[0]), polished.x[1]};
  }
  return best;
}

GpdFitSet fit_margins(const Matrix& data, std::size_t k2) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (k2 < 1 || k2 >= n) {
    throw ConfigError("k2 must satisfy 1 <= k2 < n (n = " + std::to_string(n) +
                      "), got " + std::to_string(k2));
  }
  GpdFitSet fits;
  fits.n = n;
  fits.k2 = k2;
  fits.margins.reserve(static_cast<std::size_t>(data.cols()));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    MarginFit m;
    m.sorted.assign(data.col(j).data(), data.col(j).data() + n);
    std::sort(m.sorted.begin(), m.sorted.end());
    m.threshold = m.sorted[n - k2 - 1];
    std::vector<double> excesses;
    excesses.reserve(k2);
    for (std::size_t i = n - k2; i < n; ++i) {
      const double y = m.sorted[i] - m.threshold;
      if (y > 0.0) excesses.push_back(y);
    }
    try {
      const GpdParams p = gpd_fit(excesses);
      m.sigma = p.sigma;
      m.xi = p.xi;
    } catch (const DomainError& e) {
      throw DomainError("margin " + std::to_string(j + 1) + ": " + e.what());
    }
    fits.margins.push_back(std::move(m));
  }
  return fits;
}

std::size_t order_statistic_index(double y, std::size_t n, std::size_t k2) {
  const double raw =
      std::ceil(static_cast<double>(n) - static_cast<double>(k2) / y);
  if (!(raw >= 1.0)) return 1;
  if (raw > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(raw);
}

double back_transform(double y, const MarginFit& margin, std::size_t k2) {
  if (!(y > 0.0)) {
    throw DomainError("back_transform: y must be positive, got " +
                      std::to_string(y));
  }
  if (y <= 1.0) {
    const std::size_t idx = order_statistic_index(y, margin.sorted.size(), k2);
    return margin.sorted[idx - 1];
  }
  if (xi_is_zero(margin.xi)) return margin.threshold + margin.sigma * std::log(y);
  return margin.threshold +
         margin.sigma * (std::pow(y, margin.xi) - 1.0) / margin.xi;
}

}  // namespace wagan
