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

#ifndef GRIDPRIV_HARNESS_H_
#define GRIDPRIV_HARNESS_H_

// Benchmark orchestration: synthetic placements, one release per mechanism,
// range-query scoring and a tidy CSV report.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridpriv/ledger.h"
#include "gridpriv/matrix.h"
#include "gridpriv/rnn.h"
#include "gridpriv/synth.h"
#include "gridpriv/workload.h"

namespace gridpriv {

enum class MechanismKind { kStpt, kIdentity, kFourier, kWavelet, kKalman };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kStpt;
  int k = 0;  // fourier / wavelet coefficient count

  // "stpt", "identity", "fourier-10", "wavelet-20", "kalman".
  std::string Name() const;
  static MechanismSpec Parse(std::string_view name);
};

struct BenchmarkConfig {
  double eps_total = 30.0;
  double eps_pattern = 10.0;
  double eps_sanitize = 20.0;
  int t_train = 100;
  int t_test = 120;
  int grid = 32;
  int reps = 10;
  int queries = 300;
  int households = 1000;
  double clip = 1.85;
  int k_quant = 5;
  int depth = -1;                         // -1: DefaultDepth(grid)
  std::string pattern_input = "log";      // see ParsePatternInput
  std::string pattern_mode = "anchored";  // see ParsePatternMode
  // Kalman process noise std as a multiple of clip.
  double kalman_process_factor = 0.25;
  bool clamp_output = false;
  uint64_t seed = 0;
  std::vector<Placement> placements = {Placement::kUniform, Placement::kNormal};
  std::vector<MechanismSpec> mechanisms = {
      {MechanismKind::kStpt, 0},     {MechanismKind::kIdentity, 0},
      {MechanismKind::kFourier, 10}, {MechanismKind::kFourier, 20},
      {MechanismKind::kWavelet, 10}, {MechanismKind::kWavelet, 20},
      {MechanismKind::kKalman, 0}};
  std::vector<QueryCategory> workloads = {
      QueryCategory::kRandom, QueryCategory::kSmall, QueryCategory::kLarge};
  ModelConfig model;
  ConsumerModel consumer;

  // Throws std::invalid_argument when eps_total != eps_pattern +
  // eps_sanitize or a size is out of range.
  void Validate() const;
  int horizon() const { return t_train + t_test; }
};

nlohmann::json ToJson(const BenchmarkConfig& config);
// FNV-1a 64 of the canonical JSON form.
uint64_t ConfigHash(const BenchmarkConfig& config);

struct Publication {
  ConsumptionMatrix matrix;  // publish window [t_train, horizon), kSanitized
  BudgetLedger ledger;
  nlohmann::json extra;  // mechanism details for the sidecar
  double seconds = 0.0;
};

// Releases the publish window of `cons` (clipped raw, full horizon) with one
// mechanism under a fresh ledger holding the configured budget.
Publication PublishWithMechanism(const MechanismSpec& mechanism,
                                 const ConsumptionMatrix& cons,
                                 const BenchmarkConfig& config, uint64_t seed);

struct ReportRow {
  int rep = 0;
  Placement placement = Placement::kUniform;
  std::string mechanism;
  std::string workload;
  double mean_mre = 0.0;
  size_t evaluated = 0;
  size_t excluded = 0;
  double runtime_seconds = 0.0;
  double eps_consumed = 0.0;
  bool ledger_ok = true;  // consumed exactly the configured total
  std::string status = "ok";
};

struct BenchmarkReport {
  uint64_t master_seed = 0;
  uint64_t config_hash = 0;
  std::vector<ReportRow> rows;

  // Mean of mean_mre over repetitions for one (placement, mechanism,
  // workload). NaN if no successful rows.
  double Average(Placement placement, std::string_view mechanism,
                 std::string_view workload) const;
  bool AllLedgersOk() const;
};

// Seed of repetition `rep` for `placement`.
uint64_t RepetitionSeed(uint64_t master, int rep, Placement placement);

// The clipped raw matrix of one synthetic repetition.
ConsumptionMatrix SynthMatrix(const BenchmarkConfig& config,
                              Placement placement, uint64_t seed);

// Runs every (repetition, placement, mechanism, workload). Repetitions run in
// parallel; a failing mechanism yields rows with a failure status rather than
// aborting the run.
BenchmarkReport RunBenchmark(const BenchmarkConfig& config);

// Header comment lines carry the master seed and config hash, then
//   rep,placement,mechanism,workload,mean_mre,evaluated,excluded,
//   runtime_s,eps_consumed,status
// followed by averaged rows with rep "mean". Throws std::runtime_error if any
// ledger is off budget.
void WriteReportCsv(std::ostream& out, const BenchmarkReport& report,
                    const BenchmarkConfig& config);

}  // namespace gridpriv

#endif  // GRIDPRIV_HARNESS_H_
