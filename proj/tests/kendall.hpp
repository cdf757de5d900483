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

#ifndef WAGAN_TESTS_KENDALL_HPP_
#define WAGAN_TESTS_KENDALL_HPP_

#include <Eigen/Core>

namespace wagan::testing {

// Kendall's tau-a by direct pair counting, O(n^2).
inline double kendall_tau(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.size();
  long long concordant = 0;
  long long discordant = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = (x(i) - x(j)) * (y(i) - y(j));
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant - discordant) / pairs;
}

}  // namespace wagan::testing

#endif  // WAGAN_TESTS_KENDALL_HPP_
