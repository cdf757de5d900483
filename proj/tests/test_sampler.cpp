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

#include "wagan/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "wagan/datagen.hpp"
#include "wagan/error.hpp"
#include "wagan/metrics.hpp"

namespace wagan {
namespace {

GpdFitSet toy_fits(int d) {
  GpdFitSet fits;
  fits.n = 100;
  fits.k2 = 10;
  for (int j = 0; j < d; ++j) {
    MarginFit m;
    for (int i = 1; i <= 100; ++i) m.sorted.push_back(i);
    m.threshold = 90.0;
    m.sigma = 1.0;
    m.xi = 0.5;
    fits.margins.push_back(m);
  }
  return fits;
}

AngleSource constant_source(const Vector& w) {
  return [w](std::size_t count, std::mt19937_64&) {
    return Matrix(Matrix::Ones(static_cast<Eigen::Index>(count), 1) * w.transpose());
  };
}

AngleSource logistic_source(int d, double theta) {
  return [d, theta](std::size_t count, std::mt19937_64& rng) {
    return sample_logistic_angles(d, theta, count, rng());
  };
}

TEST(BackTransformPoint, ForcedBranchTrace) {
  // Y = 2, Theta = (0.75, 0.25).
  const GpdFitSet fits = toy_fits(2);
  TailSample counters;
  counters.order_branch.assign(2, 0);
  counters.gpd_branch.assign(2, 0);
  const Vector x = back_transform_point(Vector{{1.5, 0.5}}, fits, &counters);
  EXPECT_NEAR(x(0), 90.0 + (std::sqrt(1.5) - 1.0) / 0.5, 1e-12);
  // ceil(100 - 10 / 0.5) = 80
  EXPECT_DOUBLE_EQ(x(1), 80.0);
  EXPECT_EQ(counters.gpd_branch, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(counters.order_branch, (std::vector<std::size_t>{0, 1}));
}

TEST(SampleTail, CenterAcceptanceRateIsOneHalf) {
  const TailSample t =
      sample_tail(constant_source(Vector::Constant(2, 0.5)), toy_fits(2), 10, 50000, 3);
  const double rate = 50000.0 / static_cast<double>(t.proposals);
  EXPECT_GT(t.proposals, 90000u);
  EXPECT_GE(rate, 0.49);
  EXPECT_LE(rate, 0.51);
  EXPECT_EQ(t.proposals - t.rejections, 50000u);
}

TEST(SampleTail, RowsExceedAThresholdAndAreDeterministic) {
  const GpdFitSet fits = toy_fits(3);
  const TailSample t = sample_tail(logistic_source(3, 2.0), fits, 10, 2000, 4);
  ASSERT_EQ(t.rows.rows(), 2000);
  for (Eigen::Index i = 0; i < t.rows.rows(); ++i) {
    EXPECT_TRUE((t.rows.row(i).transpose().array() > t.thresholds.array()).any());
  }
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(t.order_branch[j] + t.gpd_branch[j], 2000u);
  }
  EXPECT_EQ(sample_tail(logistic_source(3, 2.0), fits, 10, 2000, 4).rows, t.rows);
}

TEST(SampleTail, RejectsK2AboveK1AndDegenerateSources) {
  EXPECT_THROW(sample_tail(logistic_source(2, 2.0), toy_fits(2), 9, 10, 0), ConfigError);
  // All-zero rows never leave the unit box.
  EXPECT_THROW(sample_tail(constant_source(Vector::Zero(2)), toy_fits(2), 10, 1, 0),
               NumericalError);
  EXPECT_THROW(sample_tail(logistic_source(3, 2.0), toy_fits(2), 10, 1, 0), ShapeError);
}

TEST(SampleAngles, GeneratorAnglesAreOnTheSimplex) {
  const NetworkParams p = init_networks(MlpSpec{3, 4, {8}}, MlpSpec{4, 1, {8}}, 1);
  const BasisMatrix basis(5);
  const AngularSample a = sample_angles(p.generator, basis, 500, 9);
  EXPECT_EQ(a.size(), 500);
  EXPECT_LT((a.points.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_GT(a.points.minCoeff(), 0.0);
  EXPECT_EQ(sample_angles(p.generator, basis, 500, 9).points, a.points);
  EXPECT_THROW(sample_angles(p.generator, BasisMatrix(4), 5, 9), ShapeError);
}

Matrix tail_rows(const Matrix& x, const Vector& u) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if ((x.row(i).transpose().array() > u.array()).any()) keep.push_back(i);
  }
  Matrix out(static_cast<Eigen::Index>(keep.size()), x.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(keep[r]);
  return out;
}

TEST(SampleTail, ExactAnglesReproduceTheTrueTail) {
  // Light margins keep W2 stable at this sample size.
  const int d = 3;
  const Matrix train = sample_logistic({d, 2.0, 4.0, 20000, 1});
  const GpdFitSet fits = fit_margins(train, 200);
  Vector u(d);
  for (int j = 0; j < d; ++j) u(j) = fits.margins[static_cast<std::size_t>(j)].threshold;
  const Matrix held_a = tail_rows(sample_logistic({d, 2.0, 4.0, 20000, 2}), u);
  const Matrix held_b = tail_rows(sample_logistic({d, 2.0, 4.0, 20000, 3}), u);
  const TailSample gen = sample_tail(logistic_source(d, 2.0), fits, 200,
                                     static_cast<std::size_t>(held_b.rows()), 5);
  const double baseline = w2_distance(held_b, held_a);
  const double model = w2_distance(gen.rows, held_a);
  EXPECT_LT(model, 2.0 * baseline) << "model " << model << " baseline " << baseline;
}

}  // namespace
}  // namespace wagan
