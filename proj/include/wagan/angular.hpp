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

#ifndef WAGAN_ANGULAR_HPP_
#define WAGAN_ANGULAR_HPP_

// L1 polar decomposition of unit-Pareto data, the empirical angular measure
// of the observations with large radius, extremal coefficients and the
// change of norm for angular samples.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wagan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Points (rows) with nonnegative weights summing to one.
struct AngularSample {
  Matrix points;
  Vector weights;

  static AngularSample uniform(Matrix points);

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  // Throws DomainError when weights are negative or do not sum to 1.
  void validate() const;
};

struct Polar {
  double radius = 0.0;
  Vector angle;
};

// R = |v|_1 and W = v / R. Throws DomainError for negative or all-zero input.
Polar polar_decompose(const Vector& v);

struct ExtremeAngles {
  AngularSample sample;  // uniform weights
  std::vector<Eigen::Index> rows;  // source rows, ascending
  double threshold = 0.0;

  std::size_t count() const { return rows.size(); }
};

// Angles of the rows of `vhat` with R >= threshold. Throws ConfigError when
// no row qualifies.
ExtremeAngles extreme_angles_above(const Matrix& vhat, double threshold);
// Same with the threshold t = n / k1.
ExtremeAngles extreme_angles(const Matrix& vhat, std::size_t k1);

// theta_J = d * sum_i weight_i * max_{j in J} w_ij, reported without
// clipping to [1, |J|]. `subset` holds 0-based column indices.
double extremal_coefficient(const AngularSample& phi,
                            std::span<const int> subset);

enum class Norm { kL1, kL2, kLinf };

// Rescales every point to unit `target` norm and reweights proportionally to
// the target norm of the original (L1) angle.
AngularSample reweight_to_norm(const AngularSample& phi, Norm target);

inline constexpr std::size_t kDefaultSubsetCap = 25000;

struct SubsetEnumeration {
  std::vector<std::vector<int>> subsets;  // lexicographic order
  double total = 0.0;  // C(d, k)
  bool sampled = false;
  std::uint64_t seed = 0;
};

// All k-subsets of {0..d-1} when C(d, k) <= cap; otherwise `cap` distinct
// subsets drawn uniformly with the given seed.
SubsetEnumeration enumerate_subsets(int d, int k,
                                    std::size_t cap = kDefaultSubsetCap,
                                    std::uint64_t seed = 0);

double binomial(int n, int k);

}  // namespace wagan

#endif  // WAGAN_ANGULAR_HPP_
