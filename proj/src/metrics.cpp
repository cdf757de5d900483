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

#include "wagan/metrics.hpp"

#include <cmath>
#include <string>

#include "wagan/error.hpp"

namespace wagan {

DependenceScore dependence_score(const AngularSample& generated,
                                 const AngularSample& reference, int order,
                                 std::size_t cap, std::uint64_t seed) {
  if (generated.dim() != reference.dim()) {
    throw ShapeError("dependence_score: samples have dimensions " +
                     std::to_string(generated.dim()) + " and " +
                     std::to_string(reference.dim()));
  }
  generated.validate();
  reference.validate();
  const SubsetEnumeration subsets = enumerate_subsets(
      static_cast<int>(generated.dim()), order, cap, seed);

  DependenceScore out;
  out.order = order;
  out.sampled = subsets.sampled;
  out.coefficients.reserve(subsets.subsets.size());
  double acc = 0.0;
  for (const auto& subset : subsets.subsets) {
    SubsetCoefficient c;
    c.subset = subset;
    c.generated = extremal_coefficient(generated, subset);
    c.reference = extremal_coefficient(reference, subset);
    acc += std::abs(1.0 - c.generated / c.reference);
    out.coefficients.push_back(std::move(c));
  }
  out.value = acc / static_cast<double>(subsets.subsets.size());
  return out;
}

}  // namespace wagan
