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

#include "gridpriv/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "gridpriv/rng.h"

namespace gridpriv {
namespace {

constexpr uint64_t kPlacementSalt = 0x91ace;
constexpr uint64_t kProfileSalt = 0x9e0f11e;

int ClampToGrid(double v, int side) {
  return static_cast<int>(std::clamp(std::round(v), 0.0, side - 1.0));
}

}  // namespace

std::string_view PlacementName(Placement p) {
  return p == Placement::kUniform ? "uniform" : "normal";
}

Placement ParsePlacement(std::string_view name) {
  if (name == "uniform") return Placement::kUniform;
  if (name == "normal") return Placement::kNormal;
  throw std::invalid_argument("unknown placement '" + std::string(name) + "'");
}

HouseholdDataset SynthHouseholds(const PlacementSpec& spec,
                                 const ConsumerModel& model, int length) {
  if (spec.households < 1) throw std::invalid_argument("need >= 1 household");
  if (spec.grid_side < 1) throw std::invalid_argument("grid side must be >= 1");
  if (!(spec.std_fraction > 0.0))
    throw std::invalid_argument("std must be > 0");
  if (length < 1) throw std::invalid_argument("series length must be >= 1");
  if (model.intervals_per_day < 1) {
    throw std::invalid_argument("intervals_per_day must be >= 1");
  }

  const int side = spec.grid_side;
  Rng place(DeriveSeed(spec.seed, kPlacementSalt));
  const double mid = (side - 1) / 2.0;
  const double cx = spec.random_center ? place.Uniform(0.0, side) : mid;
  const double cy = spec.random_center ? place.Uniform(0.0, side) : mid;
  const double sd = side * spec.std_fraction;

  const double two_pi = 2.0 * std::numbers::pi;
  const double day = model.intervals_per_day;
  // Lognormal with the requested mean.
  const double mu =
      std::log(model.mean_scale) - 0.5 * model.scale_sigma * model.scale_sigma;

  HouseholdDataset out(spec.households);
  for (int i = 0; i < spec.households; ++i) {
    HouseholdRecord& h = out[i];
    char id[32];
    std::snprintf(id, sizeof(id), "h%06d", i);
    h.id = id;
    if (spec.distribution == Placement::kUniform) {
      h.x = static_cast<int>(place.UniformInt(side));
      h.y = static_cast<int>(place.UniformInt(side));
    } else {
      h.x = ClampToGrid(cx + sd * place.Normal(), side);
      h.y = ClampToGrid(cy + sd * place.Normal(), side);
    }

    Rng rng(DeriveSeed(spec.seed, kProfileSalt), static_cast<uint64_t>(i));
    const double scale = std::exp(mu + model.scale_sigma * rng.Normal());
    const double phase = rng.Uniform(-model.phase_jitter, model.phase_jitter) +
                         model.regional_phase * two_pi * h.x / side;
    h.readings.resize(length);
    for (int t = 0; t < length; ++t) {
      const double shape = 1.0 +
                           model.daily * std::sin(two_pi * t / day + phase) +
                           model.weekly * std::sin(two_pi * t / (7.0 * day));
      double v = scale * shape * (1.0 + model.noise * rng.Normal());
      if (rng.UniformOpen01() < model.spike_prob) {
        v += rng.Exponential(model.spike_mean);
      }
      h.readings[t] = std::max(0.0, v);
    }
  }
  return out;
}

}  // namespace gridpriv
