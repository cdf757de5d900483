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

#include <algorithm>
#include <limits>
#include <string>

#include "wagan/error.hpp"

namespace wagan {

AngleSource generator_source(const Mlp& generator, const BasisMatrix& basis) {
  if (generator.spec().output_dim != basis.coord_dim()) {
    throw ShapeError("generator output width " +
                     std::to_string(generator.spec().output_dim) +
                     " does not match basis dimension " +
                     std::to_string(basis.coord_dim()));
  }
  return [&generator, &basis](std::size_t count, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(static_cast<Eigen::Index>(count), generator.spec().input_dim);
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
    }
    return from_coordinates(generator.forward(z), basis);
  };
}

AngularSample sample_angles(const Mlp& generator, const BasisMatrix& basis,
                            std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return AngularSample::uniform(generator_source(generator, basis)(count, rng));
}

Vector back_transform_point(const Vector& y, const GpdFitSet& fits,
                            TailSample* counters) {
  if (static_cast<std::size_t>(y.size()) != fits.dim()) {
    throw ShapeError("point has " + std::to_string(y.size()) +
                     " coordinates but " + std::to_string(fits.dim()) +
                     " margins were fitted");
  }
  Vector x(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    // A softmax weight that underflowed to 0 lands on the smallest order
    // statistic, the limit of the first branch.
    const double yj = std::max(y(j), std::numeric_limits<double>::min());
    x(j) = back_transform(yj, fits.margins[static_cast<std::size_t>(j)],
                          fits.k2);
    if (counters != nullptr) {
      ++(yj <= 1.0 ? counters->order_branch : counters->gpd_branch)
          [static_cast<std::size_t>(j)];
    }
  }
  return x;
}

TailSample sample_tail(const AngleSource& angles, const GpdFitSet& fits,
                       std::size_t k1, std::size_t n_star,
                       std::uint64_t seed) {
  if (fits.k2 > k1) {
    throw ConfigError("k2 (" + std::to_string(fits.k2) +
                      ") must not exceed the k1 used in training (" +
                      std::to_string(k1) + ")");
  }
  const auto d = static_cast<Eigen::Index>(fits.dim());
  TailSample out;
  out.rows.resize(static_cast<Eigen::Index>(n_star), d);
  out.thresholds.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.thresholds(j) = fits.margins[static_cast<std::size_t>(j)].threshold;
  }
  out.order_branch.assign(fits.dim(), 0);
  out.gpd_branch.assign(fits.dim(), 0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t cap = kProposalCapFactor * std::max<std::size_t>(n_star, 1);
  std::size_t accepted = 0;
  while (accepted < n_star) {
    const Matrix block = angles(kProposalBlock, rng);
    if (block.cols() != d) {
      throw ShapeError("angle source produced " + std::to_string(block.cols()) +
                       " columns for " + std::to_string(d) + " margins");
    }
    for (Eigen::Index i = 0; i < block.rows() && accepted < n_star; ++i) {
      if (out.proposals == cap) {
        throw NumericalError(
            "tail sampler hit the proposal cap of " + std::to_string(cap) +
            " after accepting " + std::to_string(accepted) +
            " points; the angle source looks degenerate");
      }
      ++out.proposals;
      double u = 0.0;
      do {
        u = unif(rng);
      } while (u == 0.0);
      const double radius = 1.0 / (1.0 - u);
      const Vector y = radius * block.row(i).transpose();
      if (!(y.maxCoeff() > 1.0)) {
        ++out.rejections;
        continue;
      }
      out.rows.row(static_cast<Eigen::Index>(accepted)) =
          back_transform_point(y, fits, &out).transpose();
      ++accepted;
    }
  }
  return out;
}

TailSample sample_tail(const Mlp& generator, const BasisMatrix& basis,
                       const GpdFitSet& fits, std::size_t k1,
                       std::size_t n_star, std::uint64_t seed) {
  if (fits.dim() != static_cast<std::size_t>(basis.ambient_dim())) {
    throw ShapeError("generator produces " +
                     std::to_string(basis.ambient_dim()) +
                     " margins but " + std::to_string(fits.dim()) +
                     " were fitted");
  }
  return sample_tail(generator_source(generator, basis), fits, k1, n_star,
                     seed);
}

}  // namespace wagan
