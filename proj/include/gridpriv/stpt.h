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

#ifndef GRIDPRIV_STPT_H_
#define GRIDPRIV_STPT_H_

// End-to-end pattern-guided release.
//
//   1. Scale the consumption matrix for the pattern stage (see
//      PatternInput).
//   2. Build quadtree representative series over [0, t_train) and sanitize
//      them with eps_pattern.
//   3. Train the sequence model on the sanitized series and roll it out per
//      pillar over the publish window. Free-running roll-outs drift toward
//      the model's fixed point, so by default each pillar is re-anchored to
//      its ShrinkageLevels contrast (see PatternMode).
//   4. k-quantize the pattern over the publish window [t_train, C_t) and
//      release that window of the consumption matrix through the partitions
//      with eps_sanitize.
//
// Only step 4 and the series sanitization touch private data; everything the
// pattern matrix is built from has already been sanitized.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gridpriv/ledger.h"
#include "gridpriv/matrix.h"
#include "gridpriv/quadtree.h"
#include "gridpriv/rnn.h"
#include "gridpriv/sanitizer.h"

namespace gridpriv {

// Scale of the matrix the representative series are built from.
// In the two clip-based scales one household moves a cell by at most 1
// whatever the data, so the depth sensitivities hold exactly.
enum class PatternInput {
  kLogClipUnits,  // log1p(cell / clip); compresses dense hotspots
  kClipUnits,     // cell / clip
  kMinMax,        // global min-max normalization
};

std::string_view PatternInputName(PatternInput input);
// "log", "linear" or "minmax"; throws std::invalid_argument otherwise.
PatternInput ParsePatternInput(std::string_view name);

// How the publish-window pattern is formed from the per-pillar roll-out.
enum class PatternMode {
  // ShrinkageLevels contrast of the pillar plus the roll-out's deviation
  // from the cross-pillar mean roll-out at each step.
  kAnchored,
  // ShrinkageLevels contrast only, constant in time; no model is trained.
  kLevel,
  // The roll-out as generated.
  kRollout,
};

std::string_view PatternModeName(PatternMode mode);
// "anchored", "level" or "rollout"; throws std::invalid_argument otherwise.
PatternMode ParsePatternMode(std::string_view name);

struct StptConfig {
  double eps_pattern = 10.0;
  double eps_sanitize = 20.0;
  int t_train = 100;
  int k_quant = 5;
  // Quadtree depth; the finest level seeds the roll-out. Default:
  // DefaultDepth(C_x).
  std::optional<int> depth;
  PatternInput pattern_input = PatternInput::kLogClipUnits;
  PatternMode pattern_mode = PatternMode::kAnchored;
  double clip = 1.85;
  // Sanitized training values are clamped into this range before windowing.
  double train_clamp_lo = -0.5;
  double train_clamp_hi = 1.5;
  bool clamp_output = false;
  ModelConfig model;
  uint64_t seed = 0;
};

struct StptResult {
  ConsumptionMatrix published;  // publish window, raw units, kSanitized
  ConsumptionMatrix pattern;    // publish window, kPattern
  PartitionSet partitions;
  std::vector<PartitionReport> reports;
  NormalizationParams normalization;
  std::vector<double> epoch_losses;
  size_t training_samples = 0;
  double train_seconds = 0.0;
};

// The matrix the representative series are built from, tagged kNormalized.
// `params` receives the min-max range, or (0, clip) for the clip scales.
ConsumptionMatrix PatternStageInput(const ConsumptionMatrix& cons,
                                    PatternInput input, double clip,
                                    NormalizationParams* params);

// Medium depth, log2(C_x) / 2 rounded down. Deep levels are dominated by
// noise at useful budgets.
int DefaultDepth(int cx);

// `cons` is the clipped raw matrix over the full horizon. The ledger must
// hold eps_pattern and eps_sanitize in their phases. Throws
// std::invalid_argument when t_train leaves no publish window or yields no
// training samples.
StptResult RunStpt(const ConsumptionMatrix& cons, const StptConfig& config,
                   BudgetLedger& ledger);

}  // namespace gridpriv

#endif  // GRIDPRIV_STPT_H_
