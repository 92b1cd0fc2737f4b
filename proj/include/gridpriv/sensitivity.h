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

#ifndef GRIDPRIV_SENSITIVITY_H_
#define GRIDPRIV_SENSITIVITY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "gridpriv/matrix.h"

namespace gridpriv {

// Sensitivity of a single-cell query: one household contributes at most one
// reading per cell, so this is the largest reading in the dataset.
double IdentityCellSensitivity(const HouseholdDataset& dataset);

// Sensitivity of one value of a depth-`depth` representative series built
// from unit-bounded readings: 1 / 4^(log2(cx) - depth).
double DepthSensitivity(int depth, int cx);

// Sensitivity of the sum over a partition (flat cell indices into `grid`):
// per_cell_bound times the largest number of partition cells sharing one
// pillar. Throws std::invalid_argument for an empty partition.
double PartitionSensitivity(std::span<const size_t> partition,
                            const GridSpec& grid, double per_cell_bound);

// Splits eps_sanitize across partitions to minimize the total Laplace noise
// variance sum_i s_i^2 / eps_i^2 subject to sum_i eps_i = eps_sanitize:
//   eps_i = eps_sanitize * s_i^(2/3) / sum_j s_j^(2/3).
std::vector<double> AllocateBudget(std::span<const double> sensitivities,
                                   double eps_sanitize);

}  // namespace gridpriv

#endif  // GRIDPRIV_SENSITIVITY_H_
