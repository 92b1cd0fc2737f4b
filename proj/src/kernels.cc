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

#include "gridpriv/kernels.h"

#include <algorithm>

#include "gridpriv/laplace.h"
#include "gridpriv/rng.h"

namespace gridpriv::kernels {
namespace {

constexpr size_t kBucketChunk = 4096;

double SumQuery(const ConsumptionMatrix& m, const RangeQuery& q) {
  const GridSpec& g = m.grid();
  const std::span<const double> cells = m.cells();
  double total = 0.0;
  for (int x = q.x.lo; x <= q.x.hi; ++x) {
    for (int y = q.y.lo; y <= q.y.hi; ++y) {
      const size_t base = g.Index(x, y, 0);
      for (int t = q.t.lo; t <= q.t.hi; ++t) total += cells[base + t];
    }
  }
  return total;
}

void NoisePillar(std::span<const double> in, std::span<double> out,
                 double scale, uint64_t seed, uint64_t stream) {
  Rng rng(seed, stream);
  for (size_t t = 0; t < in.size(); ++t) {
    out[t] = in[t] + LaplaceSample(scale, rng);
  }
}

}  // namespace

std::vector<double> AccumulateCells(const HouseholdDataset& dataset,
                                    const GridSpec& grid) {
  std::vector<std::vector<int>> by_pillar(grid.pillars());
  for (size_t i = 0; i < dataset.size(); ++i) {
    by_pillar[grid.PillarIndex(dataset[i].x, dataset[i].y)].push_back(
        static_cast<int>(i));
  }
  std::vector<double> cells(grid.size(), 0.0);
  const int ct = grid.ct();
  ForEachPillar(grid.pillars(), [&](int p) {
    double* out = cells.data() + static_cast<size_t>(p) * ct;
    for (int h : by_pillar[p]) {
      const std::vector<double>& r = dataset[h].readings;
      for (int t = 0; t < ct; ++t) out[t] += r[t];
    }
  });
  return cells;
}

std::vector<double> AnswerQueries(const ConsumptionMatrix& matrix,
                                  std::span<const RangeQuery> queries) {
  std::vector<double> answers(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    answers[i] = SumQuery(matrix, queries[i]);
  }
  return answers;
}

std::vector<double> BucketSums(std::span<const double> values,
                               std::span<const int> bucket, int buckets) {
  const size_t chunks = (values.size() + kBucketChunk - 1) / kBucketChunk;
  std::vector<double> partial(chunks * buckets, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    double* acc = partial.data() + c * buckets;
    const size_t end = std::min(values.size(), (c + 1) * kBucketChunk);
    for (size_t i = c * kBucketChunk; i < end; ++i) acc[bucket[i]] += values[i];
  }
  std::vector<double> sums(buckets, 0.0);
  for (size_t c = 0; c < chunks; ++c) {
    for (int b = 0; b < buckets; ++b) sums[b] += partial[c * buckets + b];
  }
  return sums;
}

std::vector<double> AddCellNoise(std::span<const double> cells,
                                 const GridSpec& grid, double scale,
                                 uint64_t seed) {
  std::vector<double> out(cells.size());
  const size_t ct = grid.ct();
  ForEachPillar(grid.pillars(), [&](int p) {
    NoisePillar(cells.subspan(p * ct, ct),
                std::span<double>(out).subspan(p * ct, ct), scale, seed, p);
  });
  return out;
}

namespace reference {

std::vector<double> AccumulateCells(const HouseholdDataset& dataset,
                                    const GridSpec& grid) {
  std::vector<double> cells(grid.size(), 0.0);
  for (const HouseholdRecord& h : dataset) {
    for (int t = 0; t < grid.ct(); ++t) {
      cells[grid.Index(h.x, h.y, t)] += h.readings[t];
    }
  }
  return cells;
}

std::vector<double> AnswerQueries(const ConsumptionMatrix& matrix,
                                  std::span<const RangeQuery> queries) {
  std::vector<double> answers;
  answers.reserve(queries.size());
  for (const RangeQuery& q : queries) answers.push_back(SumQuery(matrix, q));
  return answers;
}

std::vector<double> BucketSums(std::span<const double> values,
                               std::span<const int> bucket, int buckets) {
  std::vector<double> sums(buckets, 0.0);
  for (size_t i = 0; i < values.size(); ++i) sums[bucket[i]] += values[i];
  return sums;
}

std::vector<double> AddCellNoise(std::span<const double> cells,
                                 const GridSpec& grid, double scale,
                                 uint64_t seed) {
  std::vector<double> out(cells.size());
  const size_t ct = grid.ct();
  for (int p = 0; p < grid.pillars(); ++p) {
    NoisePillar(cells.subspan(p * ct, ct),
                std::span<double>(out).subspan(p * ct, ct), scale, seed, p);
  }
  return out;
}

}  // namespace reference
}  // namespace gridpriv::kernels
