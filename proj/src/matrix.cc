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

#include "gridpriv/matrix.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gridpriv/kernels.h"

namespace gridpriv {

GridSpec::GridSpec(int cx, int cy, int ct) : cx_(cx), cy_(cy), ct_(ct) {
  if (cx <= 0 || cy <= 0 || ct <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (cx != cy) {
    throw std::invalid_argument("grid must be square (C_x == C_y)");
  }
  if (!std::has_single_bit(static_cast<unsigned>(cx))) {
    throw std::invalid_argument("grid side must be a power of two, got " +
                                std::to_string(cx));
  }
}

int GridSpec::max_depth() const {
  return std::countr_zero(static_cast<unsigned>(cx_));
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kRaw:
      return "raw";
    case Provenance::kNormalized:
      return "normalized";
    case Provenance::kPattern:
      return "pattern";
    case Provenance::kSanitized:
      return "sanitized";
  }
  return "unknown";
}

Provenance ParseProvenance(std::string_view name) {
  if (name == "raw") return Provenance::kRaw;
  if (name == "normalized") return Provenance::kNormalized;
  if (name == "pattern") return Provenance::kPattern;
  if (name == "sanitized") return Provenance::kSanitized;
  throw std::invalid_argument("unknown provenance: " + std::string(name));
}

ConsumptionMatrix::ConsumptionMatrix(GridSpec grid, Provenance provenance)
    : grid_(grid), provenance_(provenance), cells_(grid.size(), 0.0) {}

ConsumptionMatrix::ConsumptionMatrix(GridSpec grid, Provenance provenance,
                                     std::vector<double> cells)
    : grid_(grid), provenance_(provenance), cells_(std::move(cells)) {
  if (cells_.size() != grid_.size()) {
    throw std::invalid_argument("cell count does not match grid");
  }
}

ConsumptionMatrix ConsumptionMatrix::TimeWindow(int begin, int end) const {
  if (begin < 0 || end > grid_.ct() || begin >= end) {
    throw std::out_of_range("invalid time window");
  }
  const GridSpec sub = grid_.WithTime(end - begin);
  std::vector<double> out;
  out.reserve(sub.size());
  for (int x = 0; x < grid_.cx(); ++x) {
    for (int y = 0; y < grid_.cy(); ++y) {
      const auto p = pillar(x, y);
      out.insert(out.end(), p.begin() + begin, p.begin() + end);
    }
  }
  return ConsumptionMatrix(sub, provenance_, std::move(out));
}

double ConsumptionMatrix::Total() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

double ConsumptionMatrix::Min() const {
  return *std::min_element(cells_.begin(), cells_.end());
}

double ConsumptionMatrix::Max() const {
  return *std::max_element(cells_.begin(), cells_.end());
}

ConsumptionMatrix BuildConsumptionMatrix(const HouseholdDataset& dataset,
                                         const GridSpec& grid) {
  for (const HouseholdRecord& h : dataset) {
    if (h.x < 0 || h.x >= grid.cx() || h.y < 0 || h.y >= grid.cy()) {
      throw std::invalid_argument("household " + h.id +
                                  " lies outside the grid");
    }
    if (static_cast<int>(h.readings.size()) != grid.ct()) {
      throw std::invalid_argument(
          "household " + h.id + " has " + std::to_string(h.readings.size()) +
          " readings, grid expects " + std::to_string(grid.ct()));
    }
    for (double r : h.readings) {
      if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("household " + h.id +
                                    " has a negative or non-finite reading");
      }
    }
  }
  return ConsumptionMatrix(grid, Provenance::kRaw,
                           kernels::AccumulateCells(dataset, grid));
}

HouseholdDataset ClipReadings(const HouseholdDataset& dataset, double clip) {
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be positive");
  HouseholdDataset out = dataset;
  for (HouseholdRecord& h : out) {
    for (double& r : h.readings) r = std::min(r, clip);
  }
  return out;
}

NormalizedMatrix MinMaxNormalize(const ConsumptionMatrix& matrix) {
  const double lo = matrix.Min();
  const double hi = matrix.Max();
  if (!(hi > lo)) {
    throw std::invalid_argument("cannot normalize a constant matrix");
  }
  const NormalizationParams params{lo, hi};
  std::vector<double> out(matrix.cells().begin(), matrix.cells().end());
  for (double& v : out) v = std::clamp(params.Normalize(v), 0.0, 1.0);
  return {
      ConsumptionMatrix(matrix.grid(), Provenance::kNormalized, std::move(out)),
      params};
}

ConsumptionMatrix Denormalize(const ConsumptionMatrix& matrix,
                              const NormalizationParams& params,
                              Provenance provenance) {
  std::vector<double> out(matrix.cells().begin(), matrix.cells().end());
  for (double& v : out) v = params.Denormalize(v);
  return ConsumptionMatrix(matrix.grid(), provenance, std::move(out));
}

void ValidateQuery(const RangeQuery& q, const GridSpec& grid) {
  auto check = [](const Interval& iv, int n, const char* axis) {
    if (iv.lo < 0 || iv.hi >= n || iv.lo > iv.hi) {
      throw std::out_of_range(std::string("query out of bounds on axis ") +
                              axis);
    }
  };
  check(q.x, grid.cx(), "x");
  check(q.y, grid.cy(), "y");
  check(q.t, grid.ct(), "t");
}

double AnswerRangeQuery(const ConsumptionMatrix& matrix, const RangeQuery& q) {
  ValidateQuery(q, matrix.grid());
  return kernels::reference::AnswerQueries(matrix, std::span(&q, 1))[0];
}

std::optional<double> Mre(double true_answer, double noisy_answer, double tau) {
  if (true_answer <= tau) return std::nullopt;
  return std::abs(true_answer - noisy_answer) / true_answer * 100.0;
}

}  // namespace gridpriv
