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

#include "wagan/angular.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "wagan/error.hpp"

namespace wagan {

AngularSample AngularSample::uniform(Matrix points) {
  AngularSample out;
  const Eigen::Index k = points.rows();
  out.points = std::move(points);
  out.weights = Vector::Constant(k, k > 0 ? 1.0 / static_cast<double>(k) : 0.0);
  return out;
}

void AngularSample::validate() const {
  if (weights.size() != points.rows()) {
    throw ShapeError("angular sample has " + std::to_string(points.rows()) +
                     " points but " + std::to_string(weights.size()) +
                     " weights");
  }
  if (points.rows() == 0) throw DomainError("angular sample is empty");
  if ((weights.array() < 0.0).any()) {
    throw DomainError("angular sample has negative weights");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) {
    throw DomainError("angular sample weights sum to " +
                      std::to_string(weights.sum()));
  }
}

Polar polar_decompose(const Vector& v) {
  if ((v.array() < 0.0).any() || !v.allFinite()) {
    throw DomainError("polar_decompose: components must be finite and >= 0");
  }
  const double r = v.sum();
  if (!(r > 0.0)) throw DomainError("polar_decompose: zero vector");
  return {r, v / r};
}

ExtremeAngles extreme_angles_above(const Matrix& vhat, double threshold) {
  ExtremeAngles out;
  out.threshold = threshold;
  for (Eigen::Index i = 0; i < vhat.rows(); ++i) {
    if (vhat.row(i).sum() >= threshold) out.rows.push_back(i);
  }
  if (out.rows.empty()) {
    throw ConfigError("no observation has radius >= " +
                      std::to_string(threshold) +
                      "; increase k1 to lower the radial threshold");
  }
  Matrix points(static_cast<Eigen::Index>(out.rows.size()), vhat.cols());
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    const Polar p = polar_decompose(vhat.row(out.rows[r]).transpose());
    points.row(static_cast<Eigen::Index>(r)) = p.angle.transpose();
  }
  out.sample = AngularSample::uniform(std::move(points));
  return out;
}

ExtremeAngles extreme_angles(const Matrix& vhat, std::size_t k1) {
  const auto n = static_cast<std::size_t>(vhat.rows());
  if (k1 < 1 || k1 > n) {
    throw ConfigError("k1 must satisfy 1 <= k1 <= n (n = " + std::to_string(n) +
                      "), got " + std::to_string(k1));
  }
  return extreme_angles_above(
      vhat, static_cast<double>(n) / static_cast<double>(k1));
}

double extremal_coefficient(const AngularSample& phi,
                            std::span<const int> subset) {
  if (subset.size() < 2) {
    throw DomainError("extremal coefficient needs |J| >= 2, got " +
                      std::to_string(subset.size()));
  }
  const Eigen::Index d = phi.dim();
  for (int j : subset) {
    if (j < 0 || j >= d) {
      throw DomainError("extremal coefficient index " + std::to_string(j) +
                        " outside 0.." + std::to_string(d - 1));
    }
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi.points.rows(); ++i) {
    double mx = phi.points(i, subset[0]);
    for (std::size_t s = 1; s < subset.size(); ++s) {
      mx = std::max(mx, phi.points(i, subset[s]));
    }
    acc += phi.weights[i] * mx;
  }
  return static_cast<double>(d) * acc;
}

AngularSample reweight_to_norm(const AngularSample& phi, Norm target) {
  AngularSample out;
  out.points.resize(phi.points.rows(), phi.points.cols());
  out.weights.resize(phi.points.rows());
  for (Eigen::Index i = 0; i < phi.points.rows(); ++i) {
    const auto row = phi.points.row(i);
    double norm = 0.0;
    switch (target) {
      case Norm::kL1: norm = row.cwiseAbs().sum(); break;
      case Norm::kL2: norm = row.norm(); break;
      case Norm::kLinf: norm = row.cwiseAbs().maxCoeff(); break;
    }
    if (!(norm > 0.0)) throw DomainError("reweight_to_norm: zero point");
    out.points.row(i) = row / norm;
    out.weights[i] = phi.weights[i] * norm;
  }
  out.weights /= out.weights.sum();
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(acc);
}

SubsetEnumeration enumerate_subsets(int d, int k, std::size_t cap,
                                    std::uint64_t seed) {
  if (k < 2 || k > d) {
    throw DomainError("subset size must satisfy 2 <= k <= d, got k = " +
                      std::to_string(k) + ", d = " + std::to_string(d));
  }
  SubsetEnumeration out;
  out.total = binomial(d, k);
  out.seed = seed;
  if (out.total <= static_cast<double>(cap)) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      out.subsets.push_back(idx);
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == d - k + pos) {
        --pos;
      }
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < k; ++i) {
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i) - 1] + 1;
      }
    }
    return out;
  }

  out.sampled = true;
  std::mt19937_64 rng(seed);
  std::set<std::vector<int>> chosen;
  while (chosen.size() < cap) {
    // Floyd's algorithm for one uniform k-subset.
    std::set<int> s;
    for (int j = d - k; j < d; ++j) {
      const int t = std::uniform_int_distribution<int>(0, j)(rng);
      if (!s.insert(t).second) s.insert(j);
    }
    chosen.emplace(s.begin(), s.end());
  }
  out.subsets.assign(chosen.begin(), chosen.end());
  return out;
}

}  // namespace wagan
