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

#include <algorithm>
#include <iomanip>
#include <stdexcept>
#include <string>

#include "gridpriv/laplace.h"
#include "gridpriv/rng.h"
#include "gridpriv/sensitivity.h"

namespace gridpriv {

TrainingSplit SplitTrainingTime(int t_train, int cx, std::optional<int> depth) {
  const GridSpec grid(cx, cx, 1);
  const int d = depth.value_or(grid.max_depth());
  if (d < 0 || d > grid.max_depth()) {
    throw std::invalid_argument("quadtree depth must be in [0, log2(C_x)]");
  }
  const int levels = d + 1;
  if (t_train < levels) {
    throw std::invalid_argument("t_train " + std::to_string(t_train) +
                                " is smaller than the level count " +
                                std::to_string(levels));
  }
  return {levels, (t_train + levels - 1) / levels};
}

std::vector<QuadLevel> BuildLevels(const GridSpec& grid, int t_train,
                                   std::optional<int> depth) {
  if (t_train > grid.ct()) {
    throw std::invalid_argument("training prefix longer than the matrix");
  }
  const TrainingSplit split = SplitTrainingTime(t_train, grid.cx(), depth);
  std::vector<QuadLevel> levels;
  for (int d = 0; d < split.levels; ++d) {
    const int begin = d * split.t_prime;
    if (begin >= t_train) break;
    levels.push_back(
        {d, grid.cx() >> d, begin, std::min(t_train, begin + split.t_prime)});
  }
  return levels;
}

std::vector<RepresentativeSeries> BuildRepresentativeSeries(
    const ConsumptionMatrix& matrix, const QuadLevel& level) {
  const GridSpec& g = matrix.grid();
  if (level.t_begin < 0 || level.t_end > g.ct() ||
      level.t_begin >= level.t_end) {
    throw std::out_of_range("level interval outside the matrix");
  }
  if (level.side * level.per_axis() != g.cx()) {
    throw std::invalid_argument("level does not tile the grid");
  }
  const int len = level.length();
  std::vector<RepresentativeSeries> out(level.neighborhoods());
  for (int n = 0; n < level.neighborhoods(); ++n) {
    out[n].depth = level.depth;
    out[n].neighborhood = n;
    out[n].t_begin = level.t_begin;
    out[n].values.assign(len, 0.0);
  }
  for (int x = 0; x < g.cx(); ++x) {
    for (int y = 0; y < g.cy(); ++y) {
      std::vector<double>& acc = out[level.NeighborhoodOf(x, y)].values;
      const auto p = matrix.pillar(x, y);
      for (int i = 0; i < len; ++i) acc[i] += p[level.t_begin + i];
    }
  }
  const double cells = static_cast<double>(level.side) * level.side;
  for (RepresentativeSeries& s : out) {
    for (double& v : s.values) v /= cells;
  }
  return out;
}

std::vector<RepresentativeSeries> BuildAllRepresentatives(
    const ConsumptionMatrix& normalized, int t_train,
    std::optional<int> depth) {
  std::vector<RepresentativeSeries> all;
  for (const QuadLevel& level :
       BuildLevels(normalized.grid(), t_train, depth)) {
    auto series = BuildRepresentativeSeries(normalized, level);
    all.insert(all.end(), std::make_move_iterator(series.begin()),
               std::make_move_iterator(series.end()));
  }
  return all;
}

std::vector<RepresentativeSeries> SanitizeRepresentatives(
    std::vector<RepresentativeSeries> series, double eps_pattern, int t_train,
    int cx, BudgetLedger& ledger, uint64_t seed) {
  if (t_train <= 0) throw std::invalid_argument("t_train must be positive");
  const double eps_step = eps_pattern / t_train;
  // Book everything before drawing noise so an exhausted budget leaves the
  // inputs untouched.
  for (const RepresentativeSeries& s : series) {
    if (s.sanitized) throw std::invalid_argument("series already sanitized");
    for (size_t i = 0; i < s.values.size(); ++i) {
      const int t = s.t_begin + static_cast<int>(i);
      ledger.ChargeParallel(
          "pattern/d=" + std::to_string(s.depth) + "/n=" +
              std::to_string(s.neighborhood) + "/t=" + std::to_string(t),
          eps_step, Phase::kPattern, "pattern/t=" + std::to_string(t));
    }
  }
  for (size_t i = 0; i < series.size(); ++i) {
    RepresentativeSeries& s = series[i];
    const double scale = LaplaceScale(DepthSensitivity(s.depth, cx), eps_step);
    Rng rng(seed, i);
    for (double& v : s.values) v += LaplaceSample(scale, rng);
    s.sanitized = true;
  }
  return series;
}

double RepresentativeNoiseVariance(int depth, int cx, double eps_pattern,
                                   int t_train) {
  const double b =
      LaplaceScale(DepthSensitivity(depth, cx), eps_pattern / t_train);
  return 2.0 * b * b;
}

std::vector<double> ShrinkageLevels(
    const std::vector<RepresentativeSeries>& sanitized, const GridSpec& grid,
    double eps_pattern, int t_train) {
  int max_depth = -1;
  for (const RepresentativeSeries& s : sanitized) {
    if (!s.sanitized) throw std::invalid_argument("series not sanitized");
    if (s.values.empty()) throw std::invalid_argument("empty series");
    max_depth = std::max(max_depth, s.depth);
  }
  if (max_depth < 0) throw std::invalid_argument("no series");
  const int cx = grid.cx();
  std::vector<double> estimate(grid.pillars(), 0.0);
  for (int d = 0; d <= max_depth; ++d) {
    const int per_axis = 1 << d;
    const int side = cx / per_axis;
    std::vector<double> mean(per_axis * per_axis, 0.0);
    std::vector<bool> seen(mean.size(), false);
    double length = 0.0;
    for (const RepresentativeSeries& s : sanitized) {
      if (s.depth != d) continue;
      double sum = 0.0;
      for (double v : s.values) sum += v;
      mean.at(s.neighborhood) = sum / s.values.size();
      seen.at(s.neighborhood) = true;
      length = static_cast<double>(s.values.size());
    }
    for (bool b : seen) {
      if (!b) throw std::invalid_argument("missing neighborhood series");
    }
    double level_mean = 0.0;
    for (double m : mean) level_mean += m;
    level_mean /= mean.size();

    // Parent estimate of each neighborhood, read at its corner pillar.
    std::vector<double> gap(mean.size());
    double gap_sq = 0.0;
    for (int a = 0; a < per_axis; ++a) {
      for (int b = 0; b < per_axis; ++b) {
        const int n = a * per_axis + b;
        gap[n] = mean[n] - level_mean -
                 estimate[grid.PillarIndex(a * side, b * side)];
        gap_sq += gap[n] * gap[n];
      }
    }
    gap_sq /= mean.size();
    const double v =
        RepresentativeNoiseVariance(d, cx, eps_pattern, t_train) / length;
    const double tau2 = std::max(0.0, gap_sq - v);
    const double w = d == 0 ? 0.0 : tau2 / (tau2 + v);
    for (int x = 0; x < cx; ++x) {
      for (int y = 0; y < grid.cy(); ++y) {
        estimate[grid.PillarIndex(x, y)] +=
            w * gap[(x / side) * per_axis + y / side];
      }
    }
  }
  return estimate;
}

void ClampSeries(std::vector<RepresentativeSeries>& series, double lo,
                 double hi) {
  for (RepresentativeSeries& s : series) {
    for (double& v : s.values) v = std::clamp(v, lo, hi);
  }
}

std::vector<TrainingSample> Windowize(
    const std::vector<RepresentativeSeries>& series, int ws) {
  if (ws < 1) throw std::invalid_argument("window size must be >= 1");
  std::vector<TrainingSample> samples;
  for (const RepresentativeSeries& s : series) {
    const int len = static_cast<int>(s.values.size());
    for (int p = 0; p + ws < len; ++p) {
      TrainingSample sample;
      sample.window.assign(s.values.begin() + p, s.values.begin() + p + ws);
      sample.target = s.values[p + ws];
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

void WriteRepresentativesCsv(std::ostream& out,
                             const std::vector<RepresentativeSeries>& series) {
  out << "depth,neighborhood,t,value,sanitized\n" << std::setprecision(17);
  for (const RepresentativeSeries& s : series) {
    for (size_t i = 0; i < s.values.size(); ++i) {
      out << s.depth << ',' << s.neighborhood << ',' << (s.t_begin + i) << ','
          << s.values[i] << ',' << (s.sanitized ? 1 : 0) << '\n';
    }
  }
}

}  // namespace gridpriv
