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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gridpriv/harness.h"
#include "gridpriv/stpt.h"

namespace gridpriv {
namespace {

ModelConfig TinyModel() {
  ModelConfig m;
  m.embedding_dim = 8;
  m.hidden_dim = 6;
  m.epochs = 2;
  return m;
}

BenchmarkConfig TinyBenchmark() {
  BenchmarkConfig c;
  c.grid = 16;
  c.t_train = 40;
  c.t_test = 20;
  c.reps = 2;
  c.queries = 40;
  c.households = 200;
  c.model = TinyModel();
  c.seed = 11;
  return c;
}

ConsumptionMatrix TinyRaw(uint64_t seed) {
  return SynthMatrix(TinyBenchmark(), Placement::kUniform, seed);
}

StptConfig TinyStpt(PatternMode mode) {
  StptConfig c;
  c.t_train = 40;
  c.pattern_mode = mode;
  c.model = TinyModel();
  c.seed = 3;
  return c;
}

TEST(RunStpt, SpendsExactlyBothPhases) {
  const ConsumptionMatrix raw = TinyRaw(1);
  for (PatternMode mode :
       {PatternMode::kAnchored, PatternMode::kLevel, PatternMode::kRollout}) {
    BudgetLedger ledger(10.0, 20.0);
    const StptResult r = RunStpt(raw, TinyStpt(mode), ledger);
    EXPECT_NEAR(ledger.Spent(Phase::kPattern), 10.0, 1e-9);
    EXPECT_NEAR(ledger.Spent(Phase::kSanitize), 20.0, 1e-9);
    EXPECT_NEAR(ledger.TotalSpent(), 30.0, 1e-9);
    EXPECT_EQ(r.published.grid(), GridSpec(16, 16, 20));
    EXPECT_EQ(r.published.provenance(), Provenance::kSanitized);
    EXPECT_EQ(r.pattern.provenance(), Provenance::kPattern);
    EXPECT_EQ(r.pattern.grid(), r.published.grid());
    EXPECT_LE(r.partitions.partitions.size(), 5u);
    EXPECT_EQ(r.training_samples > 0, mode != PatternMode::kLevel);
  }
}

TEST(RunStpt, Deterministic) {
  const ConsumptionMatrix raw = TinyRaw(2);
  BudgetLedger a(10.0, 20.0), b(10.0, 20.0);
  const StptResult x = RunStpt(raw, TinyStpt(PatternMode::kAnchored), a);
  const StptResult y = RunStpt(raw, TinyStpt(PatternMode::kAnchored), b);
  EXPECT_TRUE(std::equal(x.published.cells().begin(), x.published.cells().end(),
                         y.published.cells().begin()));
  EXPECT_EQ(x.epoch_losses, y.epoch_losses);
}

TEST(RunStpt, RejectsBadInput) {
  const ConsumptionMatrix raw = TinyRaw(3);
  BudgetLedger ledger(10.0, 20.0);
  const ConsumptionMatrix norm(raw.grid(), Provenance::kNormalized);
  EXPECT_THROW(RunStpt(norm, TinyStpt(PatternMode::kAnchored), ledger),
               std::invalid_argument);
  StptConfig c = TinyStpt(PatternMode::kAnchored);
  c.t_train = 60;
  EXPECT_THROW(RunStpt(raw, c, ledger), std::invalid_argument);
  BudgetLedger small(5.0, 20.0);
  EXPECT_THROW(RunStpt(raw, TinyStpt(PatternMode::kAnchored), small),
               BudgetExhaustedError);
}

TEST(RunStpt, PublishedTotalTracksTruthAtLargeBudget) {
  const ConsumptionMatrix raw = TinyRaw(4);
  StptConfig c = TinyStpt(PatternMode::kLevel);
  c.eps_pattern = 1e4;
  c.eps_sanitize = 1e6;
  BudgetLedger ledger(1e4, 1e6);
  const StptResult r = RunStpt(raw, c, ledger);
  const double truth = raw.TimeWindow(40, 60).Total();
  EXPECT_NEAR(r.published.Total(), truth, 1e-3 * truth);
}

TEST(PatternNames, RoundTrip) {
  for (PatternInput in : {PatternInput::kLogClipUnits, PatternInput::kClipUnits,
                          PatternInput::kMinMax}) {
    EXPECT_EQ(ParsePatternInput(PatternInputName(in)), in);
  }
  for (PatternMode m :
       {PatternMode::kAnchored, PatternMode::kLevel, PatternMode::kRollout}) {
    EXPECT_EQ(ParsePatternMode(PatternModeName(m)), m);
  }
  EXPECT_THROW(ParsePatternInput("cubic"), std::invalid_argument);
  EXPECT_THROW(ParsePatternMode("free"), std::invalid_argument);
  EXPECT_EQ(DefaultDepth(32), 2);
  EXPECT_EQ(DefaultDepth(4), 1);
  EXPECT_EQ(DefaultDepth(1), 0);
}

TEST(MechanismSpec, ParseAndName) {
  for (const char* name :
       {"stpt", "identity", "kalman", "fourier-10", "wavelet-20"}) {
    EXPECT_EQ(MechanismSpec::Parse(name).Name(), name);
  }
  for (const char* bad : {"fourier-", "fourier-0", "wavelet-2x", "laplace"}) {
    EXPECT_THROW(MechanismSpec::Parse(bad), std::invalid_argument) << bad;
  }
}

TEST(BenchmarkConfig, ValidateAndHash) {
  BenchmarkConfig c = TinyBenchmark();
  EXPECT_NO_THROW(c.Validate());
  const uint64_t h = ConfigHash(c);
  EXPECT_EQ(ConfigHash(c), h);
  c.eps_sanitize = 25.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.eps_total = 35.0;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_NE(ConfigHash(c), h);
  c.grid = 12;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(RunBenchmark, RejectsLargeQueriesOnSmallGrid) {
  BenchmarkConfig c = TinyBenchmark();
  c.grid = 8;
  c.mechanisms = {MechanismSpec::Parse("identity")};
  EXPECT_NO_THROW(c.Validate());
  EXPECT_THROW(RunBenchmark(c), std::invalid_argument);
  c.workloads = {QueryCategory::kRandom, QueryCategory::kSmall};
  EXPECT_EQ(RunBenchmark(c).rows.size(), 2u * 2 * 2);
}

TEST(PublishWithMechanism, EveryMechanismSpendsItsBudget) {
  const BenchmarkConfig c = TinyBenchmark();
  const ConsumptionMatrix raw = SynthMatrix(c, Placement::kNormal, 5);
  for (const MechanismSpec& m : c.mechanisms) {
    const Publication p = PublishWithMechanism(m, raw, c, 5);
    EXPECT_NEAR(p.ledger.TotalSpent(), 30.0, 1e-9) << m.Name();
    EXPECT_EQ(p.matrix.grid(), GridSpec(16, 16, 20)) << m.Name();
    EXPECT_EQ(p.matrix.provenance(), Provenance::kSanitized);
  }
}

std::string WithoutRuntimes(const std::string& csv) {
  // Drops the runtime column, the only nondeterministic field.
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      out += line + '\n';
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() == 10) f.erase(f.begin() + 7);
    for (const std::string& s : f) out += s + ',';
    out += '\n';
  }
  return out;
}

TEST(RunBenchmark, ReproducibleReport) {
  BenchmarkConfig c = TinyBenchmark();
  c.mechanisms = {MechanismSpec::Parse("stpt"),
                  MechanismSpec::Parse("identity"),
                  MechanismSpec::Parse("fourier-5")};
  const BenchmarkReport a = RunBenchmark(c);
  const BenchmarkReport b = RunBenchmark(c);
  ASSERT_EQ(a.rows.size(), 2u * 2 * 3 * 3);
  EXPECT_TRUE(a.AllLedgersOk());
  std::ostringstream sa, sb;
  WriteReportCsv(sa, a, c);
  WriteReportCsv(sb, b, c);
  EXPECT_EQ(WithoutRuntimes(sa.str()), WithoutRuntimes(sb.str()));
  EXPECT_NE(sa.str().find("# master_seed=11"), std::string::npos);
  for (const ReportRow& r : a.rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_NEAR(r.eps_consumed, 30.0, 1e-9);
    EXPECT_EQ(r.evaluated + r.excluded, 40u);
  }
  EXPECT_TRUE(std::isfinite(a.Average(Placement::kUniform, "stpt", "random")));
  EXPECT_TRUE(std::isnan(a.Average(Placement::kUniform, "kalman", "random")));
}

TEST(RunBenchmark, RepetitionSeedsDiffer) {
  EXPECT_NE(RepetitionSeed(1, 0, Placement::kUniform),
            RepetitionSeed(1, 1, Placement::kUniform));
  EXPECT_NE(RepetitionSeed(1, 0, Placement::kUniform),
            RepetitionSeed(1, 0, Placement::kNormal));
  EXPECT_EQ(RepetitionSeed(1, 2, Placement::kNormal),
            RepetitionSeed(1, 2, Placement::kNormal));
}

TEST(WriteReportCsv, RefusesOffBudgetLedger) {
  BenchmarkReport r;
  r.rows.push_back({});
  r.rows.back().ledger_ok = false;
  std::ostringstream out;
  EXPECT_THROW(WriteReportCsv(out, r, TinyBenchmark()), std::runtime_error);
}

}  // namespace
}  // namespace gridpriv
