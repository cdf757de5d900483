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

#include "wagan/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wagan/error.hpp"

namespace wagan {

void LogisticConfig::validate() const {
  if (!(theta >= 1.0) || !std::isfinite(theta)) {
    throw ConfigError("theta must satisfy theta >= 1, got " +
                      std::to_string(theta));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must satisfy alpha > 0, got " +
                      std::to_string(alpha));
  }
  if (d < 2) throw ConfigError("d must be >= 2, got " + std::to_string(d));
  if (n == 0) throw ConfigError("n must be positive");
}

double sample_positive_stable(double index, std::mt19937_64& rng) {
  if (!(index > 0.0 && index <= 1.0)) {
    throw DomainError("positive stable index must lie in (0, 1], got " +
                      std::to_string(index));
  }
  if (index == 1.0) return 1.0;
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::exponential_distribution<double> expo(1.0);
  double u = 0.0;
  do {
    u = angle(rng);
  } while (u == 0.0);
  const double e = expo(rng);
  const double a = index;
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * u) / e, (1.0 - a) / a);
}

Matrix sample_logistic(const LogisticConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::exponential_distribution<double> expo(1.0);
  const double index = 1.0 / config.theta;
  Matrix out(static_cast<Eigen::Index>(config.n), config.d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double s = sample_positive_stable(index, rng);
    for (Eigen::Index j = 0; j < config.d; ++j) {
      const double t = std::pow(expo(rng) / s, index);
      // 1 - U with U = exp(-t), kept accurate for small t.
      const double survival = -std::expm1(-t);
      out(i, j) = std::pow(survival, -1.0 / config.alpha);
    }
  }
  return out;
}

double true_extremal_coefficient(double theta, int subset_size) {
  if (!(theta >= 1.0)) {
    throw DomainError("theta must be >= 1, got " + std::to_string(theta));
  }
  if (subset_size < 2) {
    throw DomainError("|J| must be >= 2, got " + std::to_string(subset_size));
  }
  return std::pow(static_cast<double>(subset_size), 1.0 / theta);
}

Matrix sample_logistic_angles(int d, double theta, std::size_t count,
                              std::uint64_t seed) {
  if (!(theta > 1.0)) {
    throw DomainError(
        "exact logistic angles need theta > 1 (theta = 1 puts all mass on "
        "the vertices), got " + std::to_string(theta));
  }
  if (d < 2) throw DomainError("d must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, d - 1);
  std::exponential_distribution<double> expo(1.0);
  std::gamma_distribution<double> tilted(1.0 - 1.0 / theta, 1.0);
  Matrix out(static_cast<Eigen::Index>(count), d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const int j = pick(rng);
    double total = 0.0;
    for (int c = 0; c < d; ++c) {
      double e = 0.0;
      do {
        e = c == j ? tilted(rng) : expo(rng);
      } while (e == 0.0);
      const double y = std::pow(e, -1.0 / theta);
      out(i, c) = y;
      total += y;
    }
    out.row(i) /= total;
  }
  return out;
}

}  // namespace wagan
