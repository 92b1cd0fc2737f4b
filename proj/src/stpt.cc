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

#include "gridpriv/stpt.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <stdexcept>

#include "gridpriv/rng.h"

namespace gridpriv {
namespace {

constexpr uint64_t kPatternNoiseSalt = 1;
constexpr uint64_t kModelSalt = 2;
constexpr uint64_t kReleaseNoiseSalt = 3;

}  // namespace

std::string_view PatternInputName(PatternInput input) {
  switch (input) {
    case PatternInput::kLogClipUnits:
      return "log";
    case PatternInput::kClipUnits:
      return "linear";
    case PatternInput::kMinMax:
      return "minmax";
  }
  return "?";
}

PatternInput ParsePatternInput(std::string_view name) {
  for (PatternInput p : {PatternInput::kLogClipUnits, PatternInput::kClipUnits,
                         PatternInput::kMinMax}) {
    if (PatternInputName(p) == name) return p;
  }
  throw std::invalid_argument("unknown pattern input '" + std::string(name) +
                              "' (expected log, linear, minmax)");
}

std::string_view PatternModeName(PatternMode mode) {
  switch (mode) {
    case PatternMode::kAnchored:
      return "anchored";
    case PatternMode::kLevel:
      return "level";
    case PatternMode::kRollout:
      return "rollout";
  }
  return "?";
}

PatternMode ParsePatternMode(std::string_view name) {
  for (PatternMode m :
       {PatternMode::kAnchored, PatternMode::kLevel, PatternMode::kRollout}) {
    if (PatternModeName(m) == name) return m;
  }
  throw std::invalid_argument("unknown pattern mode '" + std::string(name) +
                              "' (expected anchored, level, rollout)");
}

ConsumptionMatrix PatternStageInput(const ConsumptionMatrix& cons,
                                    PatternInput input, double clip,
                                    NormalizationParams* params) {
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be positive");
  if (input == PatternInput::kMinMax) {
    NormalizedMatrix norm = MinMaxNormalize(cons);
    *params = norm.params;
    return std::move(norm.matrix);
  }
  *params = NormalizationParams{0.0, clip};
  const bool log = input == PatternInput::kLogClipUnits;
  std::vector<double> cells(cons.cells().begin(), cons.cells().end());
  for (double& v : cells) v = log ? std::log1p(v / clip) : v / clip;
  return ConsumptionMatrix(cons.grid(), Provenance::kNormalized,
                           std::move(cells));
}

int DefaultDepth(int cx) { return GridSpec(cx, cx, 1).max_depth() / 2; }

StptResult RunStpt(const ConsumptionMatrix& cons, const StptConfig& config,
                   BudgetLedger& ledger) {
  if (cons.provenance() != Provenance::kRaw) {
    throw std::invalid_argument("release input must be the raw matrix");
  }
  const GridSpec& grid = cons.grid();
  const int horizon = grid.ct();
  if (config.t_train < 1 || config.t_train >= horizon) {
    throw std::invalid_argument(
        "t_train must leave a non-empty publish window");
  }
  if (!(config.eps_pattern > 0.0) || !(config.eps_sanitize > 0.0)) {
    throw std::invalid_argument("both phase budgets must be positive");
  }
  if (!(config.clip > 0.0))
    throw std::invalid_argument("clip must be positive");
  config.model.Validate();

  NormalizationParams scale;
  const ConsumptionMatrix input =
      PatternStageInput(cons, config.pattern_input, config.clip, &scale);
  const int depth = config.depth.value_or(DefaultDepth(grid.cx()));

  std::vector<RepresentativeSeries> sanitized = SanitizeRepresentatives(
      BuildAllRepresentatives(input, config.t_train, depth), config.eps_pattern,
      config.t_train, grid.cx(), ledger,
      DeriveSeed(config.seed, kPatternNoiseSalt));

  const GridSpec window_grid(grid.cx(), grid.cy(), horizon - config.t_train);
  std::vector<double> levels;
  if (config.pattern_mode != PatternMode::kRollout) {
    levels =
        ShrinkageLevels(sanitized, grid, config.eps_pattern, config.t_train);
  }

  std::vector<double> epoch_losses;
  size_t training_samples = 0;
  double train_seconds = 0.0;
  std::vector<double> cells(window_grid.size(), 0.0);
  if (config.pattern_mode == PatternMode::kLevel) {
    for (int p = 0; p < grid.pillars(); ++p) {
      std::fill_n(cells.begin() + static_cast<size_t>(p) * window_grid.ct(),
                  window_grid.ct(), levels[p]);
    }
  } else {
    const ConsumptionMatrix prefix =
        BuildSanitizedPrefix(sanitized, grid, config.t_train);
    ClampSeries(sanitized, config.train_clamp_lo, config.train_clamp_hi);
    const std::vector<TrainingSample> samples =
        Windowize(sanitized, config.model.window);
    ModelConfig model = config.model;
    model.seed = DeriveSeed(config.seed, kModelSalt);
    const auto start = std::chrono::steady_clock::now();
    TrainResult trained = Train(samples, model);
    train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    epoch_losses = std::move(trained.epoch_losses);
    training_samples = samples.size();

    const ConsumptionMatrix rollout =
        GeneratePatternMatrix(trained.params, prefix, horizon)
            .TimeWindow(config.t_train, horizon);
    cells.assign(rollout.cells().begin(), rollout.cells().end());
    if (config.pattern_mode == PatternMode::kAnchored) {
      std::vector<double> common(window_grid.ct(), 0.0);
      for (int p = 0; p < grid.pillars(); ++p) {
        for (int t = 0; t < window_grid.ct(); ++t) {
          common[t] += cells[static_cast<size_t>(p) * window_grid.ct() + t];
        }
      }
      for (double& c : common) c /= grid.pillars();
      for (int p = 0; p < grid.pillars(); ++p) {
        for (int t = 0; t < window_grid.ct(); ++t) {
          double& c = cells[static_cast<size_t>(p) * window_grid.ct() + t];
          c = levels[p] + c - common[t];
        }
      }
    }
  }
  ConsumptionMatrix pattern(window_grid, Provenance::kPattern,
                            std::move(cells));
  PartitionSet partitions = KQuantize(pattern, config.k_quant);
  SanitizedRelease release = SanitizePartitions(
      cons.TimeWindow(config.t_train, horizon), partitions, config.eps_sanitize,
      config.clip, ledger, DeriveSeed(config.seed, kReleaseNoiseSalt));

  return StptResult{
      config.clamp_output ? ClampNegative(release.matrix) : release.matrix,
      std::move(pattern),
      std::move(partitions),
      std::move(release.reports),
      scale,
      std::move(epoch_losses),
      training_samples,
      train_seconds};
}

}  // namespace gridpriv
