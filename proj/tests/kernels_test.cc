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

#include <gtest/gtest.h>

#include <atomic>

#include "gridpriv/workload.h"
#include "oracles.h"

namespace gridpriv {
namespace {

TEST(Kernels, AccumulateCellsBitIdentical) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const HouseholdDataset d = oracle::RandomHouseholds(rng, 300, 8, 24, 2.0);
    const GridSpec g(8, 8, 24);
    EXPECT_EQ(kernels::AccumulateCells(d, g),
              kernels::reference::AccumulateCells(d, g));
  }
}

TEST(Kernels, AnswerQueriesMatchReferenceAndOracle) {
  const GridSpec g(16, 16, 40);
  Rng rng(2);
  std::vector<double> cells(g.size());
  for (double& v : cells) v = rng.Uniform(0.0, 1.0);
  const ConsumptionMatrix m(g, Provenance::kRaw, cells);
  const std::vector<RangeQuery> q =
      GenerateQueries(QueryCategory::kRandom, 200, g, 2);
  const std::vector<double> fast = kernels::AnswerQueries(m, q);
  const std::vector<double> slow = kernels::reference::AnswerQueries(m, q);
  ASSERT_EQ(fast.size(), q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(fast[i], slow[i]);
    EXPECT_NEAR(fast[i], oracle::NaiveRangeSum(m, q[i]), 1e-9);
  }
}

TEST(Kernels, BucketSumsMatchReference) {
  Rng rng(3);
  for (size_t n : {0u, 1u, 1000u, 100003u}) {
    std::vector<double> v(n);
    std::vector<int> b(n);
    for (size_t i = 0; i < n; ++i) {
      v[i] = rng.Uniform(-1.0, 3.0);
      b[i] = static_cast<int>(rng.UniformInt(7));
    }
    const std::vector<double> fast = kernels::BucketSums(v, b, 7);
    const std::vector<double> slow = kernels::reference::BucketSums(v, b, 7);
    ASSERT_EQ(fast.size(), 7u);
    for (int k = 0; k < 7; ++k) {
      EXPECT_NEAR(fast[k], slow[k], 1e-9 * std::max(1.0, std::abs(slow[k])));
    }
    // Chunked reduction does not depend on the thread count.
    EXPECT_EQ(fast, kernels::BucketSums(v, b, 7));
  }
}

TEST(Kernels, AddCellNoiseBitIdentical) {
  const GridSpec g(8, 8, 50);
  const std::vector<double> cells(g.size(), 1.0);
  EXPECT_EQ(kernels::AddCellNoise(cells, g, 0.7, 4),
            kernels::reference::AddCellNoise(cells, g, 0.7, 4));
  EXPECT_NE(kernels::AddCellNoise(cells, g, 0.7, 4),
            kernels::AddCellNoise(cells, g, 0.7, 5));
}

TEST(Kernels, ForEachPillarVisitsEveryPillarOnce) {
  std::vector<std::atomic<int>> hits(1000);
  kernels::ForEachPillar(1000, [&](int p) { hits[p]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

}  // namespace
}  // namespace gridpriv
