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

#ifndef GRIDPRIV_MATRIX_H_
#define GRIDPRIV_MATRIX_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridpriv {

// Shape of the spatio-temporal grid. The spatial grid is square with a
// power-of-two side so that it can be split into quadtree levels.
class GridSpec {
 public:
  // Throws std::invalid_argument unless cx == cy, cx is a power of two and
  // ct >= 1.
  GridSpec(int cx, int cy, int ct);

  int cx() const { return cx_; }
  int cy() const { return cy_; }
  int ct() const { return ct_; }
  int pillars() const { return cx_ * cy_; }
  size_t size() const { return static_cast<size_t>(pillars()) * ct_; }
  // log2(cx); depth of the finest quadtree level.
  int max_depth() const;

  size_t Index(int x, int y, int t) const {
    return (static_cast<size_t>(x) * cy_ + y) * ct_ + t;
  }
  size_t PillarIndex(int x, int y) const {
    return static_cast<size_t>(x) * cy_ + y;
  }

  GridSpec WithTime(int ct) const { return GridSpec(cx_, cy_, ct); }

  bool operator==(const GridSpec&) const = default;

 private:
  int cx_;
  int cy_;
  int ct_;
};

struct HouseholdRecord {
  std::string id;
  int x = 0;
  int y = 0;
  std::vector<double> readings;  // kWh per interval, length T
};

using HouseholdDataset = std::vector<HouseholdRecord>;

// Where the values of a matrix came from. Anything derived only from
// kPattern or kSanitized matrices is post-processing and costs no budget.
enum class Provenance { kRaw, kNormalized, kPattern, kSanitized };

std::string_view ProvenanceName(Provenance p);
Provenance ParseProvenance(std::string_view name);

inline bool IsPrivate(Provenance p) {
  return p == Provenance::kPattern || p == Provenance::kSanitized;
}

// Dense C_x x C_y x C_t array, row-major in (x, y, t) so each pillar (one
// spatial cell's time series) is contiguous. Immutable once built.
class ConsumptionMatrix {
 public:
  ConsumptionMatrix(GridSpec grid, Provenance provenance);
  ConsumptionMatrix(GridSpec grid, Provenance provenance,
                    std::vector<double> cells);

  const GridSpec& grid() const { return grid_; }
  Provenance provenance() const { return provenance_; }

  double at(int x, int y, int t) const { return cells_[grid_.Index(x, y, t)]; }
  std::span<const double> cells() const { return cells_; }
  std::span<const double> pillar(int x, int y) const {
    return std::span<const double>(cells_).subspan(
        grid_.Index(x, y, 0), static_cast<size_t>(grid_.ct()));
  }

  // Time steps [begin, end) as a new matrix with the same provenance.
  ConsumptionMatrix TimeWindow(int begin, int end) const;

  double Total() const;
  double Min() const;
  double Max() const;

 private:
  GridSpec grid_;
  Provenance provenance_;
  std::vector<double> cells_;
};

struct NormalizationParams {
  double global_min = 0.0;
  double global_max = 1.0;

  double Normalize(double v) const {
    return (v - global_min) / (global_max - global_min);
  }
  double Denormalize(double v) const {
    return v * (global_max - global_min) + global_min;
  }
};

struct NormalizedMatrix {
  ConsumptionMatrix matrix;
  NormalizationParams params;
};

struct Interval {
  int lo = 0;  // inclusive
  int hi = 0;  // inclusive
  int length() const { return hi - lo + 1; }
};

struct RangeQuery {
  Interval x;
  Interval y;
  Interval t;
};

// Queries whose true answer is at or below this are excluded from MRE.
inline constexpr double kMreTau = 1e-6;

// Sums household readings into their cells. Throws std::invalid_argument on a
// reading-length mismatch, a negative reading, or an out-of-grid cell.
ConsumptionMatrix BuildConsumptionMatrix(const HouseholdDataset& dataset,
                                         const GridSpec& grid);

// Caps every reading at `clip`. Throws std::invalid_argument if clip <= 0.
HouseholdDataset ClipReadings(const HouseholdDataset& dataset, double clip);

// Global min-max normalization of the cell values. Throws
// std::invalid_argument for a constant matrix.
NormalizedMatrix MinMaxNormalize(const ConsumptionMatrix& matrix);

// Maps a normalized matrix back to raw units, tagging the result with
// `provenance`.
ConsumptionMatrix Denormalize(const ConsumptionMatrix& matrix,
                              const NormalizationParams& params,
                              Provenance provenance);

void ValidateQuery(const RangeQuery& q, const GridSpec& grid);

// Sum of the cells inside `q`. Throws std::out_of_range for a query outside
// the grid.
double AnswerRangeQuery(const ConsumptionMatrix& matrix, const RangeQuery& q);

// Relative error in percent; nullopt when true_answer <= tau, in which case
// the query must be excluded from averages.
std::optional<double> Mre(double true_answer, double noisy_answer,
                          double tau = kMreTau);

}  // namespace gridpriv

#endif  // GRIDPRIV_MATRIX_H_
