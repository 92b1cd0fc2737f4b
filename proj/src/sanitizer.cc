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

#include "gridpriv/sanitizer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gridpriv/kernels.h"
#include "gridpriv/laplace.h"
#include "gridpriv/rng.h"
#include "gridpriv/sensitivity.h"

namespace gridpriv {

int QuantizeBucket(double v, double lo, double hi, int k) {
  if (!(hi > lo)) return 0;
  const double scaled = std::floor((v - lo) * k / (hi - lo));
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(k - 1)));
}

PartitionSet KQuantize(const ConsumptionMatrix& pattern, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!IsPrivate(pattern.provenance())) {
    throw std::invalid_argument(
        "partitions may only be derived from a private matrix");
  }
  const auto cells = pattern.cells();
  if (!std::all_of(cells.begin(), cells.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("pattern matrix has non-finite cells");
  }
  PartitionSet out;
  out.grid = pattern.grid();
  out.k = k;
  const double lo = pattern.Min();
  const double hi = pattern.Max();
  out.assignment.resize(cells.size());
  std::vector<std::vector<size_t>> members(k);
  for (size_t i = 0; i < cells.size(); ++i) {
    const int b = QuantizeBucket(cells[i], lo, hi, k);
    out.assignment[i] = b;
    members[b].push_back(i);
  }
  for (int b = 0; b < k; ++b) {
    if (!members[b].empty())
      out.partitions.push_back({b, std::move(members[b])});
  }
  return out;
}

SanitizedRelease SanitizePartitions(const ConsumptionMatrix& cons,
                                    const PartitionSet& partitions,
                                    double eps_sanitize, double clip,
                                    BudgetLedger& ledger, uint64_t seed) {
  if (!(cons.grid() == partitions.grid) ||
      partitions.assignment.size() != cons.grid().size()) {
    throw std::invalid_argument("partitions do not match the matrix shape");
  }
  if (partitions.partitions.empty()) {
    throw std::invalid_argument("no partitions to sanitize");
  }
  const size_t m = partitions.partitions.size();
  std::vector<double> sens(m);
  for (size_t i = 0; i < m; ++i) {
    sens[i] =
        PartitionSensitivity(partitions.partitions[i].cells, cons.grid(), clip);
  }
  const std::vector<double> eps = AllocateBudget(sens, eps_sanitize);

  // A pillar can meet several partitions, so their charges add up.
  for (size_t i = 0; i < m; ++i) {
    ledger.ChargeSequential(
        "sanitize/bucket=" + std::to_string(partitions.partitions[i].bucket),
        eps[i], Phase::kSanitize);
  }

  const std::vector<double> sums =
      kernels::BucketSums(cons.cells(), partitions.assignment, partitions.k);
  SanitizedRelease out{ConsumptionMatrix(cons.grid(), Provenance::kSanitized),
                       {}};
  std::vector<double> cells(cons.grid().size(), 0.0);
  for (size_t i = 0; i < m; ++i) {
    const Partition& p = partitions.partitions[i];
    Rng rng(seed, i);
    const double noisy =
        sums[p.bucket] + LaplaceSample(LaplaceScale(sens[i], eps[i]), rng);
    const double per_cell = noisy / static_cast<double>(p.cells.size());
    for (size_t c : p.cells) cells[c] = per_cell;
    out.reports.push_back({p.bucket, p.cells.size(), sens[i], eps[i], noisy});
  }
  out.matrix =
      ConsumptionMatrix(cons.grid(), Provenance::kSanitized, std::move(cells));
  return out;
}

ConsumptionMatrix ClampNegative(const ConsumptionMatrix& matrix) {
  std::vector<double> cells(matrix.cells().begin(), matrix.cells().end());
  for (double& v : cells) v = std::max(v, 0.0);
  return ConsumptionMatrix(matrix.grid(), matrix.provenance(),
                           std::move(cells));
}

}  // namespace gridpriv
