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

#ifndef GRIDPRIV_QUADTREE_H_
#define GRIDPRIV_QUADTREE_H_

// Pattern-recognition training data: the training prefix of the normalized
// matrix is cut into one time interval per quadtree level, each level's
// neighborhoods are averaged into representative series, and those series
// are sanitized with a depth-scaled sensitivity and windowed into samples.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "gridpriv/ledger.h"
#include "gridpriv/matrix.h"

namespace gridpriv {

struct TrainingSplit {
  int levels = 0;   // quadtree levels, depth 0 .. levels-1
  int t_prime = 0;  // time steps per level, ceil(t_train / levels)
};

// levels = depth + 1 (depth defaults to log2(cx)). Throws
// std::invalid_argument when t_train < levels or depth is out of range.
TrainingSplit SplitTrainingTime(int t_train, int cx,
                                std::optional<int> depth = std::nullopt);

// One quadtree level: 4^depth square neighborhoods of side cx / 2^depth,
// covering time steps [t_begin, t_end) of the training prefix.
struct QuadLevel {
  int depth = 0;
  int side = 0;
  int t_begin = 0;
  int t_end = 0;

  int per_axis() const { return 1 << depth; }
  int neighborhoods() const { return per_axis() * per_axis(); }
  // Neighborhoods are numbered row-major over (x block, y block).
  int NeighborhoodOf(int x, int y) const {
    return (x / side) * per_axis() + (y / side);
  }
  int length() const { return t_end - t_begin; }
};

// The levels that cover [0, t_train). The last interval is truncated at
// t_train; levels whose interval starts at or beyond t_train are omitted.
std::vector<QuadLevel> BuildLevels(const GridSpec& grid, int t_train,
                                   std::optional<int> depth = std::nullopt);

struct RepresentativeSeries {
  int depth = 0;
  int neighborhood = 0;
  int t_begin = 0;
  std::vector<double> values;
  bool sanitized = false;
};

// One series per neighborhood; each value is the mean over the
// neighborhood's cells (empty cells count as zeros) at that time step.
std::vector<RepresentativeSeries> BuildRepresentativeSeries(
    const ConsumptionMatrix& matrix, const QuadLevel& level);

// Representative series for every level, depth-major then neighborhood.
std::vector<RepresentativeSeries> BuildAllRepresentatives(
    const ConsumptionMatrix& normalized, int t_train,
    std::optional<int> depth = std::nullopt);

// Perturbs every value with Lap(DepthSensitivity(depth) / (eps_pattern /
// t_train)). Series i draws from Rng(seed, i). At each time step the
// neighborhoods of one level are disjoint and are booked as parallel charges
// in group "pattern/t=<t>"; distinct time steps add sequentially.
std::vector<RepresentativeSeries> SanitizeRepresentatives(
    std::vector<RepresentativeSeries> series, double eps_pattern, int t_train,
    int cx, BudgetLedger& ledger, uint64_t seed);

// Clamps every value into [lo, hi]; budget-free post-processing.
void ClampSeries(std::vector<RepresentativeSeries>& series, double lo,
                 double hi);

// Noise variance of one sanitized value at `depth`.
double RepresentativeNoiseVariance(int depth, int cx, double eps_pattern,
                                   int t_train);

// Spatial contrast of every pillar, indexed by GridSpec::PillarIndex, from
// sanitized series (budget-free). Per depth, each neighborhood's mean over
// its interval is centered on the level average; top-down, a child's
// contrast is shrunk toward its parent's estimate with weight
// tau2 / (tau2 + v). v is the noise variance of the interval mean and tau2
// the excess over v of the mean squared child-minus-parent gap, floored at
// zero. Throws std::invalid_argument on unsanitized input or a missing level.
std::vector<double> ShrinkageLevels(
    const std::vector<RepresentativeSeries>& sanitized, const GridSpec& grid,
    double eps_pattern, int t_train);

struct TrainingSample {
  std::vector<double> window;
  double target = 0.0;
};

// Stride-1 windows over each series separately; a series of length L gives
// max(0, L - ws) samples.
std::vector<TrainingSample> Windowize(
    const std::vector<RepresentativeSeries>& series, int ws);

// Debug dump: `depth,neighborhood,t,value,sanitized`.
void WriteRepresentativesCsv(std::ostream& out,
                             const std::vector<RepresentativeSeries>& series);

}  // namespace gridpriv

#endif  // GRIDPRIV_QUADTREE_H_
