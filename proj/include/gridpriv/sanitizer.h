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

#ifndef GRIDPRIV_SANITIZER_H_
#define GRIDPRIV_SANITIZER_H_

// Release stage: the pattern matrix is bucketed into k equal-width value
// levels, each non-empty bucket becomes a partition of cells, and every
// partition's total over the consumption matrix is released with Laplace
// noise and spread evenly across its cells.

#include <cstdint>
#include <vector>

#include "gridpriv/ledger.h"
#include "gridpriv/matrix.h"

namespace gridpriv {

// Bucket of `v` among k equal-width intervals of [lo, hi]; the top edge
// belongs to the last bucket. Every value maps to bucket 0 when hi == lo.
int QuantizeBucket(double v, double lo, double hi, int k);

struct Partition {
  int bucket = 0;
  std::vector<size_t> cells;  // flat indices, ascending
};

struct PartitionSet {
  GridSpec grid{1, 1, 1};
  int k = 1;
  std::vector<int> assignment;        // bucket per cell
  std::vector<Partition> partitions;  // non-empty buckets, ascending bucket id
};

// Buckets every cell of `pattern` between its own min and max. Throws
// std::invalid_argument for k < 1, a non-finite cell, or a matrix that is not
// private (pattern or sanitized).
PartitionSet KQuantize(const ConsumptionMatrix& pattern, int k);

struct PartitionReport {
  int bucket = 0;
  size_t size = 0;
  double sensitivity = 0.0;
  double epsilon = 0.0;
  double noisy_sum = 0.0;
};

struct SanitizedRelease {
  ConsumptionMatrix matrix;
  std::vector<PartitionReport> reports;
};

// Releases `cons` through the partitions. Partition i has sensitivity
// PartitionSensitivity(P_i, clip) and receives its share of eps_sanitize from
// AllocateBudget; each is booked as a sequential charge. Partition i draws
// its noise from Rng(seed, i). The output is tagged kSanitized.
//
// Throws std::invalid_argument if the shapes differ or there are no
// partitions, and BudgetExhaustedError before any noise is drawn if the
// ledger cannot cover eps_sanitize.
SanitizedRelease SanitizePartitions(const ConsumptionMatrix& cons,
                                    const PartitionSet& partitions,
                                    double eps_sanitize, double clip,
                                    BudgetLedger& ledger, uint64_t seed);

// Sets negative cells to zero. For presentation only: it biases range sums.
ConsumptionMatrix ClampNegative(const ConsumptionMatrix& matrix);

}  // namespace gridpriv

#endif  // GRIDPRIV_SANITIZER_H_
