// Copyright 2026 The gridpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gridpriv/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace gridpriv {

double IdentityCellSensitivity(const HouseholdDataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  double best = 0.0;
  for (const HouseholdRecord& h : dataset) {
    for (double r : h.readings) best = std::max(best, r);
  }
  return best;
}

double DepthSensitivity(int depth, int cx) {
  const GridSpec grid(cx, cx, 1);
  if (depth < 0 || depth > grid.max_depth()) {
    throw std::out_of_range("quadtree depth out of range");
  }
  return std::ldexp(1.0, -2 * (grid.max_depth() - depth));
}

double PartitionSensitivity(std::span<const size_t> partition,
                            const GridSpec& grid, double per_cell_bound) {
  if (partition.empty()) {
    throw std::invalid_argument("partition sensitivity of an empty partition");
  }
  if (!(per_cell_bound > 0.0)) {
    throw std::invalid_argument("per-cell bound must be positive");
  }
  std::unordered_map<size_t, int> per_pillar;
  int best = 0;
  for (size_t cell : partition) {
    if (cell >= grid.size()) throw std::out_of_range("cell outside grid");
    best = std::max(best, ++per_pillar[cell / grid.ct()]);
  }
  return per_cell_bound * best;
}

std::vector<double> AllocateBudget(std::span<const double> sensitivities,
                                   double eps_sanitize) {
  if (sensitivities.empty()) {
    throw std::invalid_argument("no partitions to allocate budget to");
  }
  if (!(eps_sanitize > 0.0)) {
    throw std::invalid_argument("sanitize budget must be positive");
  }
  std::vector<double> weights;
  weights.reserve(sensitivities.size());
  double total = 0.0;
  for (double s : sensitivities) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("partition sensitivities must be positive");
    }
    weights.push_back(std::cbrt(s * s));
    total += weights.back();
  }
  for (double& w : weights) w = eps_sanitize * w / total;
  return weights;
}

}  // namespace gridpriv
