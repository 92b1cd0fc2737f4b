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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gridpriv/sensitivity.h"
#include "oracles.h"

namespace gridpriv {
namespace {

TEST(QuantizeBucket, WorkedValues) {
  EXPECT_EQ(QuantizeBucket(0.3, 0.0, 1.0, 4), 1);
  EXPECT_EQ(QuantizeBucket(0.0, 0.0, 1.0, 4), 0);
  EXPECT_EQ(QuantizeBucket(1.0, 0.0, 1.0, 4), 3);
  EXPECT_EQ(QuantizeBucket(0.25, 0.0, 1.0, 4), 1);
  EXPECT_EQ(QuantizeBucket(0.7, 0.0, 1.0, 1), 0);
  EXPECT_EQ(QuantizeBucket(5.0, 5.0, 5.0, 3), 0);
}

TEST(QuantizeBucket, AgreesWithEdgeWalk) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double lo = rng.Uniform(-5.0, 5.0);
    const double hi = lo + rng.Uniform(1e-3, 10.0);
    const int k = 1 + static_cast<int>(rng.UniformInt(12));
    double v = rng.Uniform(lo, hi);
    if (i % 10 == 0) v = hi;
    if (i % 10 == 1) v = lo;
    const int got = QuantizeBucket(v, lo, hi, k);
    const int want = oracle::BruteBucket(v, lo, hi, k);
    // Values within rounding of an interior edge may land on either side.
    if (got != want) {
      const double edge = lo + std::max(got, want) * ((hi - lo) / k);
      EXPECT_NEAR(v, edge, 1e-12 * (hi - lo)) << v << " k=" << k;
      EXPECT_EQ(std::abs(got - want), 1);
    }
  }
}

ConsumptionMatrix PatternOf(const GridSpec& g, std::vector<double> cells) {
  return ConsumptionMatrix(g, Provenance::kPattern, std::move(cells));
}

TEST(KQuantize, PartitionsCoverEveryCellOnce) {
  const GridSpec g(4, 4, 10);
  Rng rng(2);
  std::vector<double> cells(g.size());
  for (double& c : cells) c = rng.Uniform(0.0, 3.0);
  const PartitionSet set = KQuantize(PatternOf(g, cells), 5);
  std::vector<int> seen(g.size(), 0);
  int last_bucket = -1;
  for (const Partition& p : set.partitions) {
    EXPECT_GT(p.bucket, last_bucket);
    last_bucket = p.bucket;
    EXPECT_FALSE(p.cells.empty());
    EXPECT_TRUE(std::is_sorted(p.cells.begin(), p.cells.end()));
    for (size_t c : p.cells) {
      ++seen[c];
      EXPECT_EQ(set.assignment[c], p.bucket);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(KQuantize, SingleBucketAndConstantPattern) {
  const GridSpec g(2, 2, 3);
  std::vector<double> cells(g.size());
  for (size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  EXPECT_EQ(KQuantize(PatternOf(g, cells), 1).partitions.size(), 1u);
  EXPECT_EQ(KQuantize(PatternOf(g, std::vector<double>(12, 0.4)), 5)
                .partitions.size(),
            1u);
}

TEST(KQuantize, RefusesNonPrivateOrBadInput) {
  const GridSpec g(2, 2, 2);
  const ConsumptionMatrix raw(g, Provenance::kRaw);
  EXPECT_THROW(KQuantize(raw, 3), std::invalid_argument);
  const ConsumptionMatrix norm(g, Provenance::kNormalized);
  EXPECT_THROW(KQuantize(norm, 3), std::invalid_argument);
  EXPECT_THROW(KQuantize(PatternOf(g, std::vector<double>(8, 0.0)), 0),
               std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[3] = NAN;
  EXPECT_THROW(KQuantize(PatternOf(g, bad), 2), std::invalid_argument);
}

TEST(PartitionSensitivity, CountsCellsPerPillar) {
  const GridSpec g(2, 2, 5);
  const std::vector<size_t> cells = {0, 1, 2, 5, 10, 11};
  EXPECT_EQ(PartitionSensitivity(cells, g, 1.5), 4.5);
  EXPECT_THROW(PartitionSensitivity(std::vector<size_t>{}, g, 1.0),
               std::invalid_argument);
  EXPECT_THROW(PartitionSensitivity(std::vector<size_t>{20}, g, 1.0),
               std::out_of_range);
}

TEST(PartitionSensitivity, BoundsEnumeratedNeighbors) {
  Rng rng(3);
  const GridSpec g(4, 4, 6);
  const double clip = 1.2;
  for (int trial = 0; trial < 50; ++trial) {
    const HouseholdDataset d = ClipReadings(
        oracle::RandomHouseholds(rng, 1 + rng.UniformInt(8), 4, 6, 2.0), clip);
    std::vector<double> pattern(g.size());
    for (double& v : pattern) v = rng.Uniform(0.0, 1.0);
    const PartitionSet set = KQuantize(PatternOf(g, pattern), 4);
    const ConsumptionMatrix full = BuildConsumptionMatrix(d, g);
    for (size_t h = 0; h < d.size(); ++h) {
      const ConsumptionMatrix less =
          BuildConsumptionMatrix(oracle::Without(d, h), g);
      for (const Partition& p : set.partitions) {
        double delta = 0.0;
        for (size_t c : p.cells) delta += full.cells()[c] - less.cells()[c];
        ASSERT_LE(std::abs(delta),
                  PartitionSensitivity(p.cells, g, clip) + 1e-12);
      }
    }
  }
}

TEST(SanitizePartitions, HugeBudgetRecoversTotals) {
  const GridSpec g(2, 2, 2);
  const ConsumptionMatrix cons(g, Provenance::kRaw,
                               std::vector<double>(8, 1.0));
  std::vector<double> pattern = {0, 0, 1, 1, 0, 1, 0, 1};
  const PartitionSet set = KQuantize(PatternOf(g, pattern), 2);
  BudgetLedger ledger(0.0, 1e6);
  const SanitizedRelease r = SanitizePartitions(cons, set, 1e6, 1.0, ledger, 4);
  EXPECT_EQ(r.matrix.provenance(), Provenance::kSanitized);
  for (double v : r.matrix.cells()) EXPECT_NEAR(v, 1.0, 1e-4);
}

TEST(SanitizePartitions, AllocatesByTwoThirdsPower) {
  // One cell against eight cells of the same pillar: sensitivities 1 and 8.
  const GridSpec g(1, 1, 9);
  std::vector<double> pattern(9, 1.0);
  pattern[0] = 0.0;
  const PartitionSet set = KQuantize(PatternOf(g, pattern), 2);
  const ConsumptionMatrix cons(g, Provenance::kRaw,
                               std::vector<double>(9, 0.5));
  BudgetLedger ledger(0.0, 1.0);
  const SanitizedRelease r = SanitizePartitions(cons, set, 1.0, 1.0, ledger, 5);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_NEAR(r.reports[0].epsilon, 0.2, 1e-12);
  EXPECT_NEAR(r.reports[1].epsilon, 0.8, 1e-12);
  EXPECT_EQ(r.reports[1].sensitivity, 8.0);
  EXPECT_EQ(ledger.charge_count(), 2u);
  EXPECT_NEAR(ledger.Spent(Phase::kSanitize), 1.0, 1e-12);
  for (const LedgerCharge& c : ledger.charges()) {
    EXPECT_EQ(c.composition, Composition::kSequentialTime);
  }
}

TEST(SanitizePartitions, CellsEqualWithinEachPartition) {
  const GridSpec g(4, 4, 8);
  Rng rng(6);
  std::vector<double> pattern(g.size()), raw(g.size());
  for (double& v : pattern) v = rng.Uniform(0.0, 1.0);
  for (double& v : raw) v = rng.Uniform(0.0, 5.0);
  const PartitionSet set = KQuantize(PatternOf(g, pattern), 5);
  BudgetLedger ledger(0.0, 20.0);
  const SanitizedRelease r = SanitizePartitions(
      ConsumptionMatrix(g, Provenance::kRaw, raw), set, 20.0, 1.85, ledger, 6);
  for (size_t i = 0; i < set.partitions.size(); ++i) {
    const Partition& p = set.partitions[i];
    for (size_t c : p.cells) {
      EXPECT_EQ(r.matrix.cells()[c], r.matrix.cells()[p.cells.front()]);
    }
    EXPECT_NEAR(r.matrix.cells()[p.cells.front()] * p.cells.size(),
                r.reports[i].noisy_sum,
                1e-9 * std::abs(r.reports[i].noisy_sum));
  }
}

TEST(SanitizePartitions, UnbiasedTotal) {
  const GridSpec g(4, 4, 8);
  Rng rng(7);
  std::vector<double> pattern(g.size()), raw(g.size());
  for (double& v : pattern) v = rng.Uniform(0.0, 1.0);
  for (double& v : raw) v = rng.Uniform(0.0, 1.85);
  const ConsumptionMatrix cons(g, Provenance::kRaw, raw);
  const PartitionSet set = KQuantize(PatternOf(g, pattern), 3);
  double mean = 0.0, var_sum = 0.0;
  const int runs = 200;
  for (int run = 0; run < runs; ++run) {
    BudgetLedger ledger(0.0, 5.0);
    const SanitizedRelease r =
        SanitizePartitions(cons, set, 5.0, 1.85, ledger, 1000 + run);
    mean += r.matrix.Total() / runs;
    if (run == 0) {
      for (const PartitionReport& p : r.reports) {
        const double b = p.sensitivity / p.epsilon;
        var_sum += 2 * b * b;
      }
    }
  }
  EXPECT_NEAR(mean, cons.Total(), 4.0 * std::sqrt(var_sum / runs));
}

TEST(SanitizePartitions, DeterministicAndChecksBudgetFirst) {
  const GridSpec g(2, 2, 4);
  std::vector<double> pattern(g.size());
  for (size_t i = 0; i < pattern.size(); ++i) pattern[i] = i % 3;
  const PartitionSet set = KQuantize(PatternOf(g, pattern), 3);
  const ConsumptionMatrix cons(g, Provenance::kRaw,
                               std::vector<double>(g.size(), 1.0));
  BudgetLedger a(0.0, 2.0), b(0.0, 2.0), c(0.0, 1.0);
  const auto x = SanitizePartitions(cons, set, 2.0, 1.0, a, 9);
  const auto y = SanitizePartitions(cons, set, 2.0, 1.0, b, 9);
  EXPECT_TRUE(std::equal(x.matrix.cells().begin(), x.matrix.cells().end(),
                         y.matrix.cells().begin()));
  EXPECT_THROW(SanitizePartitions(cons, set, 2.0, 1.0, c, 9),
               BudgetExhaustedError);
  EXPECT_THROW(
      SanitizePartitions(ConsumptionMatrix(GridSpec(2, 2, 5), Provenance::kRaw),
                         set, 1.0, 1.0, a, 9),
      std::invalid_argument);
}

TEST(ClampNegative, ZeroesNegatives) {
  const ConsumptionMatrix m(GridSpec(1, 1, 3), Provenance::kSanitized,
                            {-1.0, 0.0, 2.0});
  const ConsumptionMatrix c = ClampNegative(m);
  EXPECT_EQ(std::vector<double>(c.cells().begin(), c.cells().end()),
            (std::vector<double>{0.0, 0.0, 2.0}));
  EXPECT_EQ(c.provenance(), Provenance::kSanitized);
}

}  // namespace
}  // namespace gridpriv
