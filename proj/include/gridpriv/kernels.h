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

#ifndef GRIDPRIV_KERNELS_H_
#define GRIDPRIV_KERNELS_H_

// Data-parallel inner loops. Each kernel has an OpenMP implementation in
// gridpriv::kernels and a plain serial one in gridpriv::kernels::reference.
// The library calls the parallel versions; tests check them against the
// reference and bench/ times both.
//
// Kernels do not validate their inputs; the public operations that call
// them do.

#include <cstdint>
#include <span>
#include <vector>

#include "gridpriv/matrix.h"

namespace gridpriv::kernels {

// Cell totals of a dataset. Bit-identical to the reference: every cell adds
// its households in record order.
std::vector<double> AccumulateCells(const HouseholdDataset& dataset,
                                    const GridSpec& grid);

std::vector<double> AnswerQueries(const ConsumptionMatrix& matrix,
                                  std::span<const RangeQuery> queries);

// Per-bucket sums of `values`. Reduction runs over fixed-size chunks that are
// combined in chunk order, so the result does not depend on thread count.
std::vector<double> BucketSums(std::span<const double> values,
                               std::span<const int> bucket, int buckets);

// Adds Lap(scale) noise to every cell. Pillar p draws from Rng(seed, p).
std::vector<double> AddCellNoise(std::span<const double> cells,
                                 const GridSpec& grid, double scale,
                                 uint64_t seed);

// Runs fn(pillar_index) for every pillar in parallel.
template <typename Fn>
void ForEachPillar(int pillars, Fn&& fn) {
#pragma omp parallel for schedule(dynamic, 8)
  for (int p = 0; p < pillars; ++p) fn(p);
}

namespace reference {

std::vector<double> AccumulateCells(const HouseholdDataset& dataset,
                                    const GridSpec& grid);
std::vector<double> AnswerQueries(const ConsumptionMatrix& matrix,
                                  std::span<const RangeQuery> queries);
std::vector<double> BucketSums(std::span<const double> values,
                               std::span<const int> bucket, int buckets);
std::vector<double> AddCellNoise(std::span<const double> cells,
                                 const GridSpec& grid, double scale,
                                 uint64_t seed);

template <typename Fn>
void ForEachPillar(int pillars, Fn&& fn) {
  for (int p = 0; p < pillars; ++p) fn(p);
}

}  // namespace reference
}  // namespace gridpriv::kernels

#endif  // GRIDPRIV_KERNELS_H_
