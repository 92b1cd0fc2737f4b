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

#ifndef GRIDPRIV_SYNTH_H_
#define GRIDPRIV_SYNTH_H_

// Synthetic smart-meter data: households placed on the grid and given load
// profiles from a seeded consumer model.

#include <cstdint>
#include <string>
#include <string_view>

#include "gridpriv/matrix.h"

namespace gridpriv {

enum class Placement { kUniform, kNormal };

std::string_view PlacementName(Placement p);
Placement ParsePlacement(std::string_view name);

struct PlacementSpec {
  Placement distribution = Placement::kUniform;
  int households = 1000;
  int grid_side = 32;
  // Normal placement: std = grid_side * std_fraction around the map center,
  // or around a uniformly drawn center if random_center is set; coordinates
  // are rounded and clamped to the grid.
  double std_fraction = 1.0 / 3.0;
  bool random_center = false;
  uint64_t seed = 0;
};

// Load profile per household and interval:
//
//   scale_i * (1 + daily * sin(2 pi t / per_day + phase_i + region(x))
//                + weekly * sin(2 pi t / (7 per_day)))
//           * (1 + noise * N(0, 1))  +  spike
//
// clamped at zero. scale_i is lognormal with mean `mean_scale`; phase_i is
// uniform in +-phase_jitter; region(x) = regional_phase * 2 pi x / side
// shifts the daily cycle across the map; spikes occur with probability
// spike_prob and have exponential size with mean spike_mean.
struct ConsumerModel {
  int intervals_per_day = 48;
  double mean_scale = 0.45;
  double scale_sigma = 0.5;
  double daily = 0.6;
  double weekly = 0.15;
  double phase_jitter = 0.5;
  double regional_phase = 0.5;
  double noise = 0.15;
  double spike_prob = 0.03;
  double spike_mean = 1.5;
};

// Throws std::invalid_argument for a non-positive household count, grid
// side, std, or length.
HouseholdDataset SynthHouseholds(const PlacementSpec& spec,
                                 const ConsumerModel& model, int length);

}  // namespace gridpriv

#endif  // GRIDPRIV_SYNTH_H_
