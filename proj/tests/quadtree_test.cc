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

#include "gridpriv/quadtree.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gridpriv/sensitivity.h"
#include "gridpriv/stpt.h"
#include "oracles.h"

namespace gridpriv {
namespace {

ConsumptionMatrix RandomUnitMatrix(const GridSpec& g, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cells(g.size());
  for (double& c : cells) c = rng.Uniform(0.0, 1.0);
  return ConsumptionMatrix(g, Provenance::kNormalized, std::move(cells));
}

TEST(SplitTrainingTime, WorkedValues) {
  TrainingSplit s = SplitTrainingTime(6, 4);
  EXPECT_EQ(s.levels, 3);
  EXPECT_EQ(s.t_prime, 2);
  s = SplitTrainingTime(100, 32);
  EXPECT_EQ(s.levels, 6);
  EXPECT_EQ(s.t_prime, 17);
  s = SplitTrainingTime(3, 4);
  EXPECT_EQ(s.levels, 3);
  EXPECT_EQ(s.t_prime, 1);
  s = SplitTrainingTime(100, 32, 2);
  EXPECT_EQ(s.levels, 3);
  EXPECT_EQ(s.t_prime, 34);
  EXPECT_THROW(SplitTrainingTime(2, 4), std::invalid_argument);
  EXPECT_THROW(SplitTrainingTime(10, 4, 3), std::invalid_argument);
}

TEST(BuildLevels, NeighborhoodsTileTheGrid) {
  for (int cx : {4, 8, 16, 32}) {
    const GridSpec g(cx, cx, 64);
    const std::vector<QuadLevel> levels = BuildLevels(g, 64);
    ASSERT_EQ(static_cast<int>(levels.size()), g.max_depth() + 1);
    for (const QuadLevel& level : levels) {
      EXPECT_EQ(level.neighborhoods(), 1 << (2 * level.depth));
      std::vector<int> count(level.neighborhoods(), 0);
      for (int x = 0; x < cx; ++x) {
        for (int y = 0; y < cx; ++y) ++count[level.NeighborhoodOf(x, y)];
      }
      for (int c : count) EXPECT_EQ(c, level.side * level.side);
    }
  }
}

TEST(BuildLevels, LastIntervalTruncated) {
  const std::vector<QuadLevel> levels = BuildLevels(GridSpec(32, 32, 200), 100);
  ASSERT_EQ(levels.size(), 6u);
  EXPECT_EQ(levels[4].t_begin, 68);
  EXPECT_EQ(levels[4].t_end, 85);
  EXPECT_EQ(levels[5].t_begin, 85);
  EXPECT_EQ(levels[5].t_end, 100);
}

TEST(BuildAllRepresentatives, SmallExampleHas21Series) {
  const ConsumptionMatrix m = RandomUnitMatrix(GridSpec(4, 4, 6), 1);
  const std::vector<RepresentativeSeries> all = BuildAllRepresentatives(m, 6);
  ASSERT_EQ(all.size(), 21u);
  int per_depth[3] = {0, 0, 0};
  for (const RepresentativeSeries& s : all) {
    ++per_depth[s.depth];
    EXPECT_EQ(s.values.size(), 2u);
    EXPECT_EQ(s.t_begin, 2 * s.depth);
    EXPECT_FALSE(s.sanitized);
  }
  EXPECT_EQ(per_depth[0], 1);
  EXPECT_EQ(per_depth[1], 4);
  EXPECT_EQ(per_depth[2], 16);
}

TEST(BuildRepresentativeSeries, RootIsGlobalMeanAndMeanOfQuadrants) {
  const GridSpec g(8, 8, 5);
  const ConsumptionMatrix m = RandomUnitMatrix(g, 2);
  const auto root = BuildRepresentativeSeries(m, {0, 8, 0, 5});
  const auto quads = BuildRepresentativeSeries(m, {1, 4, 0, 5});
  for (int t = 0; t < 5; ++t) {
    double sum = 0.0;
    for (int x = 0; x < 8; ++x) {
      for (int y = 0; y < 8; ++y) sum += m.at(x, y, t);
    }
    EXPECT_NEAR(root[0].values[t], sum / 64, 1e-12);
    double quad_mean = 0.0;
    for (const auto& q : quads) quad_mean += q.values[t] / 4;
    EXPECT_NEAR(root[0].values[t], quad_mean, 1e-12);
  }
}

TEST(BuildRepresentativeSeries, ConstantMatrixGivesConstantSeries) {
  const GridSpec g(8, 8, 12);
  const ConsumptionMatrix m(g, Provenance::kNormalized,
                            std::vector<double>(g.size(), 0.37));
  for (const RepresentativeSeries& s : BuildAllRepresentatives(m, 12)) {
    for (double v : s.values) EXPECT_NEAR(v, 0.37, 1e-15);
  }
}

TEST(SanitizeRepresentatives, NoiseScaleFollowsDepth) {
  const GridSpec g(32, 32, 100);
  const ConsumptionMatrix m(g, Provenance::kNormalized,
                            std::vector<double>(g.size(), 0.5));
  BudgetLedger ledger(10.0, 1.0);
  const std::vector<RepresentativeSeries> clean =
      BuildAllRepresentatives(m, 100);
  const std::vector<RepresentativeSeries> noisy =
      SanitizeRepresentatives(clean, 10.0, 100, 32, ledger, 9);
  // Mean absolute Laplace noise equals its scale b.
  std::vector<double> abs_sum(6, 0.0), count(6, 0.0);
  for (size_t i = 0; i < noisy.size(); ++i) {
    ASSERT_TRUE(noisy[i].sanitized);
    for (size_t t = 0; t < noisy[i].values.size(); ++t) {
      abs_sum[noisy[i].depth] += std::abs(noisy[i].values[t] - 0.5);
      ++count[noisy[i].depth];
    }
  }
  EXPECT_NEAR(abs_sum[5] / count[5], 10.0, 0.3);
  EXPECT_NEAR(abs_sum[4] / count[4], 2.5, 0.15);
  EXPECT_NEAR(RepresentativeNoiseVariance(5, 32, 10.0, 100), 200.0, 1e-9);
  EXPECT_NEAR(std::sqrt(RepresentativeNoiseVariance(0, 32, 10.0, 100) / 2),
              (1.0 / 1024) / 0.1, 1e-12);
}

TEST(SanitizeRepresentatives, PatternBudgetIsExactlySpent) {
  const GridSpec g(32, 32, 100);
  const ConsumptionMatrix m = RandomUnitMatrix(g, 3);
  for (int depth : {0, 2, 5}) {
    BudgetLedger ledger(10.0, 1.0);
    SanitizeRepresentatives(BuildAllRepresentatives(m, 100, depth), 10.0, 100,
                            32, ledger, 1);
    EXPECT_NEAR(ledger.Spent(Phase::kPattern), 10.0, 1e-9);
    EXPECT_EQ(ledger.Spent(Phase::kSanitize), 0.0);
    EXPECT_THROW(ledger.ChargeSequential("more", 1e-6, Phase::kPattern),
                 BudgetExhaustedError);
  }
}

TEST(SanitizeRepresentatives, DeterministicAndRefusesDoubleNoise) {
  const ConsumptionMatrix m = RandomUnitMatrix(GridSpec(4, 4, 6), 4);
  BudgetLedger a(10.0, 1.0), b(10.0, 1.0), c(10.0, 1.0);
  const auto x =
      SanitizeRepresentatives(BuildAllRepresentatives(m, 6), 10, 6, 4, a, 5);
  const auto y =
      SanitizeRepresentatives(BuildAllRepresentatives(m, 6), 10, 6, 4, b, 5);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].values, y[i].values);
  EXPECT_THROW(SanitizeRepresentatives(x, 10, 6, 4, c, 5),
               std::invalid_argument);
}

TEST(SanitizeRepresentatives, ExhaustedLedgerLeavesNoCharges) {
  const ConsumptionMatrix m = RandomUnitMatrix(GridSpec(4, 4, 6), 4);
  BudgetLedger ledger(5.0, 1.0);
  EXPECT_THROW(SanitizeRepresentatives(BuildAllRepresentatives(m, 6), 10, 6, 4,
                                       ledger, 5),
               BudgetExhaustedError);
  EXPECT_LE(ledger.Spent(Phase::kPattern), 5.0);
}

TEST(Windowize, Counts) {
  RepresentativeSeries s{0, 0, 0, {1, 2, 3, 4, 5, 6, 7, 8}, true};
  std::vector<TrainingSample> w = Windowize({s}, 6);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].window, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(w[0].target, 7);
  EXPECT_EQ(w[1].target, 8);
  s.values.resize(6);
  EXPECT_TRUE(Windowize({s}, 6).empty());
  const std::vector<RepresentativeSeries> short_series(
      21, RepresentativeSeries{0, 0, 0, {0.1, 0.2}, true});
  EXPECT_TRUE(Windowize(short_series, 6).empty());
}

TEST(Windowize, NeverCrossesSeries) {
  const RepresentativeSeries a{0, 0, 0, {0, 0, 0, 0}, true};
  const RepresentativeSeries b{1, 0, 4, {1, 1, 1, 1}, true};
  for (const TrainingSample& s : Windowize({a, b}, 3)) {
    for (double v : s.window) EXPECT_EQ(v, s.target);
  }
}

TEST(ClampSeries, ClampsIntoRange) {
  std::vector<RepresentativeSeries> s = {{0, 0, 0, {-3, 0.5, 4}, true}};
  ClampSeries(s, -0.5, 1.5);
  EXPECT_EQ(s[0].values, (std::vector<double>{-0.5, 0.5, 1.5}));
}

TEST(RepresentativeSensitivity, EnumeratedNeighborsStayWithinBound) {
  // Removing one household with unit-bounded readings moves a depth-d value
  // by at most DepthSensitivity(d).
  Rng rng(31);
  const GridSpec g(4, 4, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const HouseholdDataset d =
        oracle::RandomHouseholds(rng, 1 + rng.UniformInt(6), 4, 8, 1.0);
    const ConsumptionMatrix full = BuildConsumptionMatrix(d, g);
    for (size_t h = 0; h < d.size(); ++h) {
      const ConsumptionMatrix less =
          BuildConsumptionMatrix(oracle::Without(d, h), g);
      for (int depth = 0; depth <= 2; ++depth) {
        const QuadLevel level{depth, 4 >> depth, 0, 8};
        const auto a = BuildRepresentativeSeries(full, level);
        const auto b = BuildRepresentativeSeries(less, level);
        for (size_t n = 0; n < a.size(); ++n) {
          for (int t = 0; t < 8; ++t) {
            ASSERT_LE(std::abs(a[n].values[t] - b[n].values[t]),
                      DepthSensitivity(depth, 4) + 1e-15);
          }
        }
      }
    }
  }
}

TEST(PatternStageInput, ClipScalesKeepUnitCellSensitivity) {
  Rng rng(32);
  const GridSpec g(4, 4, 8);
  const double clip = 1.85;
  for (int trial = 0; trial < 50; ++trial) {
    const HouseholdDataset d = ClipReadings(
        oracle::RandomHouseholds(rng, 1 + rng.UniformInt(6), 4, 8, 3.0), clip);
    const ConsumptionMatrix full = BuildConsumptionMatrix(d, g);
    for (size_t h = 0; h < d.size(); ++h) {
      const ConsumptionMatrix less =
          BuildConsumptionMatrix(oracle::Without(d, h), g);
      for (PatternInput in :
           {PatternInput::kLogClipUnits, PatternInput::kClipUnits}) {
        NormalizationParams p;
        const ConsumptionMatrix a = PatternStageInput(full, in, clip, &p);
        const ConsumptionMatrix b = PatternStageInput(less, in, clip, &p);
        for (size_t i = 0; i < g.size(); ++i) {
          ASSERT_LE(std::abs(a.cells()[i] - b.cells()[i]), 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST(PatternStageInput, ScalesAndTags) {
  const ConsumptionMatrix raw(GridSpec(1, 1, 3), Provenance::kRaw, {0, 2, 6});
  NormalizationParams p;
  const ConsumptionMatrix lin =
      PatternStageInput(raw, PatternInput::kClipUnits, 2.0, &p);
  EXPECT_EQ(lin.at(0, 0, 2), 3.0);
  EXPECT_EQ(lin.provenance(), Provenance::kNormalized);
  EXPECT_EQ(p.global_max, 2.0);
  const ConsumptionMatrix lg =
      PatternStageInput(raw, PatternInput::kLogClipUnits, 2.0, &p);
  EXPECT_NEAR(lg.at(0, 0, 1), std::log(2.0), 1e-15);
  const ConsumptionMatrix mm =
      PatternStageInput(raw, PatternInput::kMinMax, 2.0, &p);
  EXPECT_NEAR(mm.at(0, 0, 1), 1.0 / 3, 1e-15);
  EXPECT_EQ(p.global_max, 6.0);
}

std::vector<RepresentativeSeries> Sanitized(const ConsumptionMatrix& m,
                                            double eps, int t_train, int depth,
                                            uint64_t seed) {
  BudgetLedger ledger(eps, 1.0);
  return SanitizeRepresentatives(BuildAllRepresentatives(m, t_train, depth),
                                 eps, t_train, m.grid().cx(), ledger, seed);
}

TEST(ShrinkageLevels, NoiselessLimitRecoversFinestContrast) {
  const GridSpec g(8, 8, 30);
  const ConsumptionMatrix m = RandomUnitMatrix(g, 40);
  const auto series = Sanitized(m, 1e12, 30, 3, 1);
  const std::vector<double> levels = ShrinkageLevels(series, g, 1e12, 30);
  // Finest level: depth 3 (single cells) over its interval.
  double grand = 0.0;
  std::vector<double> mean(g.pillars(), 0.0);
  for (const RepresentativeSeries& s : series) {
    if (s.depth != 3) continue;
    double sum = 0.0;
    for (double v : s.values) sum += v;
    mean[s.neighborhood] = sum / s.values.size();
    grand += mean[s.neighborhood] / g.pillars();
  }
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      EXPECT_NEAR(levels[g.PillarIndex(x, y)], mean[x * 8 + y] - grand, 1e-9);
    }
  }
}

TEST(ShrinkageLevels, ConstantWithinFinestNeighborhood) {
  const GridSpec g(16, 16, 40);
  const ConsumptionMatrix m = RandomUnitMatrix(g, 41);
  const auto series = Sanitized(m, 10.0, 40, 2, 2);
  const std::vector<double> levels = ShrinkageLevels(series, g, 10.0, 40);
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) {
      EXPECT_EQ(levels[g.PillarIndex(x, y)],
                levels[g.PillarIndex(x / 4 * 4, y / 4 * 4)]);
    }
  }
}

TEST(ShrinkageLevels, PureNoiseShrinksTowardZero) {
  // A constant matrix has no spatial contrast; with heavy noise almost all
  // of the measured contrast is shrunk away.
  const GridSpec g(16, 16, 40);
  const ConsumptionMatrix m(g, Provenance::kNormalized,
                            std::vector<double>(g.size(), 0.5));
  double raw = 0.0, shrunk = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto series = Sanitized(m, 1.0, 40, 4, seed);
    const std::vector<double> levels = ShrinkageLevels(series, g, 1.0, 40);
    for (const RepresentativeSeries& s : series) {
      if (s.depth != 4) continue;
      double sum = 0.0;
      for (double v : s.values) sum += v;
      raw += std::abs(sum / s.values.size() - 0.5);
    }
    for (double v : levels) shrunk += std::abs(v);
  }
  EXPECT_LT(shrunk, 0.1 * raw);
}

TEST(ShrinkageLevels, RejectsUnsanitizedInput) {
  const GridSpec g(4, 4, 6);
  const ConsumptionMatrix m = RandomUnitMatrix(g, 42);
  EXPECT_THROW(ShrinkageLevels(BuildAllRepresentatives(m, 6), g, 1.0, 6),
               std::invalid_argument);
}

TEST(WriteRepresentativesCsv, OneRowPerValue) {
  const std::vector<RepresentativeSeries> s = {{1, 2, 4, {0.5, 0.25}, true}};
  std::ostringstream out;
  WriteRepresentativesCsv(out, s);
  EXPECT_EQ(
      out.str(),
      "depth,neighborhood,t,value,sanitized\n1,2,4,0.5,1\n1,2,5,0.25,1\n");
}

}  // namespace
}  // namespace gridpriv
