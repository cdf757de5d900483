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

#ifndef WAGAN_SAMPLER_HPP_
#define WAGAN_SAMPLER_HPP_

// Tail sampling: angles from a generator, a unit-Pareto radius, acceptance
// when the point leaves the unit box, and the marginal back-transform.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "wagan/aitchison.hpp"
#include "wagan/angular.hpp"
#include "wagan/margins.hpp"
#include "wagan/wgan.hpp"

namespace wagan {

// Draws `count` simplex points (rows) from `rng`.
using AngleSource =
    std::function<Matrix(std::size_t count, std::mt19937_64& rng)>;

// softmax(V G(z)) for z standard normal.
AngleSource generator_source(const Mlp& generator, const BasisMatrix& basis);

AngularSample sample_angles(const Mlp& generator, const BasisMatrix& basis,
                            std::size_t count, std::uint64_t seed);

struct TailSample {
  Matrix rows;  // n_star x d, original scale
  Vector thresholds;
  std::vector<std::size_t> order_branch;  // per margin, Y_j <= 1
  std::vector<std::size_t> gpd_branch;    // per margin, Y_j > 1
  std::size_t proposals = 0;
  std::size_t rejections = 0;
};

// Proposals are drawn in blocks of this many angles.
inline constexpr std::size_t kProposalBlock = 1024;
inline constexpr std::size_t kProposalCapFactor = 10000;

// Requires fits.k2 <= k1 (ConfigError otherwise).
TailSample sample_tail(const AngleSource& angles, const GpdFitSet& fits,
                       std::size_t k1, std::size_t n_star, std::uint64_t seed);
TailSample sample_tail(const Mlp& generator, const BasisMatrix& basis,
                       const GpdFitSet& fits, std::size_t k1,
                       std::size_t n_star, std::uint64_t seed);

// Maps one unit-Pareto point Y = radius * angle to the data scale, updating
// the branch counters when given.
Vector back_transform_point(const Vector& y, const GpdFitSet& fits,
                            TailSample* counters = nullptr);

}  // namespace wagan

#endif  // WAGAN_SAMPLER_HPP_
