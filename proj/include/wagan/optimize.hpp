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

#ifndef WAGAN_OPTIMIZE_HPP_
#define WAGAN_OPTIMIZE_HPP_

#include <Eigen/Core>

#include <functional>

namespace wagan {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double tolerance = 1e-10;  // on the spread of simplex values
  int max_iterations = 5000;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Derivative-free minimization. The objective may return +inf to mark
// infeasible points; the start point must be feasible.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const NelderMeadOptions& options = {});

}  // namespace wagan

#endif  // WAGAN_OPTIMIZE_HPP_
