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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wagan/error.hpp"
#include "wagan/log.hpp"

namespace wagan {
namespace {

std::vector<double> gpd_sample(double sigma, double xi, std::size_t n,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (double& y : out) {
    const double p = unif(rng);
    y = xi == 0.0 ? -sigma * std::log1p(-p)
                  : sigma * (std::pow(1.0 - p, -xi) - 1.0) / xi;
    if (y == 0.0) y = 1e-300;
  }
  return out;
}

class WarningCapture {
 public:
  WarningCapture()
      : previous_(log::set_warning_sink(
            [this](std::string_view m) { messages.emplace_back(m); })) {}
  ~WarningCapture() { log::set_warning_sink(previous_); }
  std::vector<std::string> messages;

 private:
  log::Sink previous_;
};

TEST(ParetoStandardize, HandRanks) {
  Matrix x(4, 1);
  x << 3, 1, 4, 2;
  const Matrix v = pareto_standardize(x);
  EXPECT_DOUBLE_EQ(v(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(v(1, 0), 1.25);
  EXPECT_DOUBLE_EQ(v(2, 0), 5.0);
  EXPECT_DOUBLE_EQ(v(3, 0), 5.0 / 3.0);
}

TEST(ParetoStandardize, ExtremesOfEveryColumn) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix x(50, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  const Matrix v = pareto_standardize(x);
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_DOUBLE_EQ(v.col(j).maxCoeff(), 51.0);
    EXPECT_DOUBLE_EQ(v.col(j).minCoeff(), 51.0 / 50.0);
  }
  EXPECT_THROW(pareto_standardize(Matrix::Ones(1, 2)), DomainError);
}

TEST(ParetoStandardize, TiesAreBrokenByRowIndexWithWarning) {
  WarningCapture capture;
  Matrix x(3, 1);
  x << 2, 2, 1;
  const Matrix v = pareto_standardize(x);
  EXPECT_DOUBLE_EQ(v(2, 0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(v(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(v(1, 0), 4.0);
  EXPECT_EQ(capture.messages.size(), 1u);
}

TEST(Gpd, LogDensityHandValue) {
  EXPECT_NEAR(gpd_log_density(1.0, 1.0, 1.0), -2.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(gpd_log_density(2.0, 2.0, 0.0), -std::log(2.0) - 1.0, 1e-14);
  // Outside the support for xi < 0.
  EXPECT_EQ(gpd_log_density(3.0, 1.0, -0.5), -std::numeric_limits<double>::infinity());
}

TEST(Gpd, QuantileInvertsCdf) {
  for (double xi : {-0.3, 0.0, 0.5}) {
    for (double p : {0.1, 0.5, 0.99}) {
      const double y = gpd_quantile(p, 1.5, xi);
      const double cdf = xi == 0.0 ? 1.0 - std::exp(-y / 1.5)
                                   : 1.0 - std::pow(1.0 + xi * y / 1.5, -1.0 / xi);
      EXPECT_NEAR(cdf, p, 1e-12);
    }
  }
}

struct GpdCase {
  double sigma;
  double xi;
};

class GpdRecovery : public ::testing::TestWithParam<GpdCase> {};

TEST_P(GpdRecovery, TenThousandDraws) {
  const auto [sigma, xi] = GetParam();
  const auto y = gpd_sample(sigma, xi, 10000, 2024);
  const GpdParams fit = gpd_fit(y);
  EXPECT_NEAR(fit.sigma, sigma, 0.1);
  EXPECT_NEAR(fit.xi, xi, 0.05);
}

INSTANTIATE_TEST_SUITE_P(Cases, GpdRecovery,
                         ::testing::Values(GpdCase{2.0, 0.0}, GpdCase{1.0, 0.5},
                                           GpdCase{1.0, -0.2}),
                         [](const auto& info) {
                           return "case" + std::to_string(info.index);
                         });

TEST(Gpd, FitIsALocalMaximumOfTheLikelihood) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto y = gpd_sample(0.7, 0.3, 300, seed);
    const GpdParams fit = gpd_fit(y);
    const double best = gpd_log_likelihood(y, fit.sigma, fit.xi);
    for (double ds : {-1e-3, 0.0, 1e-3}) {
      for (double dx : {-1e-3, 0.0, 1e-3}) {
        EXPECT_LE(gpd_log_likelihood(y, fit.sigma * (1.0 + ds), fit.xi + dx),
                  best + 1e-9);
      }
    }
  }
}

TEST(Gpd, FitRejectsDegenerateInput) {
  EXPECT_THROW(gpd_fit(std::vector<double>(5, 1.0)), DomainError);
  EXPECT_THROW(gpd_fit(std::vector<double>(20, 1.0)), DomainError);
  std::vector<double> y(20, 1.0);
  y[3] = -1.0;
  EXPECT_THROW(gpd_fit(y), DomainError);
}

TEST(FitMargins, ThresholdIsTheOrderStatistic) {
  Matrix x(40, 2);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = 39 - i;  // reversed
    x(i, 1) = std::pow(1.0 + i, 1.3);
  }
  const GpdFitSet fits = fit_margins(x, 15);
  ASSERT_EQ(fits.dim(), 2u);
  EXPECT_DOUBLE_EQ(fits.margins[0].threshold, 24.0);  // X_{25:40}
  EXPECT_DOUBLE_EQ(fits.margins[1].threshold, std::pow(25.0, 1.3));
  EXPECT_TRUE(std::is_sorted(fits.margins[0].sorted.begin(), fits.margins[0].sorted.end()));
  EXPECT_GT(fits.margins[0].sigma, 0.0);
  EXPECT_THROW(fit_margins(x, 40), ConfigError);
  EXPECT_THROW(fit_margins(x, 0), ConfigError);
}

MarginFit toy_margin(double sigma, double xi) {
  MarginFit m;
  for (int i = 1; i <= 100; ++i) m.sorted.push_back(i);
  m.threshold = 90.0;  // n = 100, k2 = 10
  m.sigma = sigma;
  m.xi = xi;
  return m;
}

TEST(BackTransform, BranchValues) {
  const MarginFit m = toy_margin(1.0, 0.5);
  EXPECT_DOUBLE_EQ(back_transform(1.0, m, 10), 90.0);
  EXPECT_DOUBLE_EQ(back_transform(4.0, m, 10), 92.0);
  // y = 0.5: ceil(100 - 20) = 80.
  EXPECT_DOUBLE_EQ(back_transform(0.5, m, 10), 80.0);
  // Tiny y falls back to the minimum.
  EXPECT_DOUBLE_EQ(back_transform(1e-9, m, 10), 1.0);

  const MarginFit flat = toy_margin(2.0, 1e-10);
  EXPECT_NEAR(back_transform(std::exp(1.0), flat, 10), 92.0, 1e-12);
  EXPECT_THROW(back_transform(0.0, m, 10), DomainError);
}

TEST(BackTransform, OrderStatisticIndexIsClamped) {
  EXPECT_EQ(order_statistic_index(1e-6, 100, 10), 1u);
  EXPECT_EQ(order_statistic_index(1.0, 100, 10), 90u);
  EXPECT_EQ(order_statistic_index(0.999999999999, 100, 10), 90u);
  EXPECT_EQ(order_statistic_index(100.0, 100, 10), 100u);
}

TEST(BackTransform, MonotoneAcrossTheSeam) {
  for (double xi : {-0.3, 0.0, 0.4}) {
    const MarginFit m = toy_margin(1.3, xi);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 10000; ++i) {
      const double y = 10.0 * i / 10000.0;
      const double x = back_transform(y, m, 10);
      EXPECT_GE(x, prev) << "y = " << y;
      prev = x;
    }
  }
}

}  // namespace
}  // namespace wagan
