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

#include "gridpriv/workload.h"

#include <stdexcept>

#include "gridpriv/kernels.h"
#include "gridpriv/rng.h"

namespace gridpriv {
namespace {

Interval Draw(Rng& rng, int axis, int extent) {
  const int lo = static_cast<int>(rng.UniformInt(axis - extent + 1));
  return {lo, lo + extent - 1};
}

Interval DrawRandom(Rng& rng, int axis) {
  const int extent = 1 + static_cast<int>(rng.UniformInt(axis));
  return Draw(rng, axis, extent);
}

}  // namespace

std::string_view CategoryName(QueryCategory c) {
  switch (c) {
    case QueryCategory::kRandom:
      return "random";
    case QueryCategory::kSmall:
      return "small";
    case QueryCategory::kLarge:
      return "large";
  }
  return "?";
}

QueryCategory ParseCategory(std::string_view name) {
  if (name == "random") return QueryCategory::kRandom;
  if (name == "small") return QueryCategory::kSmall;
  if (name == "large") return QueryCategory::kLarge;
  throw std::invalid_argument("unknown query category '" + std::string(name) +
                              "'");
}

std::vector<RangeQuery> GenerateQueries(QueryCategory category, int count,
                                        const GridSpec& grid, uint64_t seed) {
  if (count < 0) throw std::invalid_argument("query count must be >= 0");
  if (category == QueryCategory::kLarge &&
      (grid.cx() < kLargeQuerySide || grid.cy() < kLargeQuerySide ||
       grid.ct() < kLargeQuerySide)) {
    throw std::invalid_argument("grid too small for large queries");
  }
  Rng rng(seed, static_cast<uint64_t>(category));
  std::vector<RangeQuery> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    RangeQuery q;
    switch (category) {
      case QueryCategory::kRandom:
        q.x = DrawRandom(rng, grid.cx());
        q.y = DrawRandom(rng, grid.cy());
        q.t = DrawRandom(rng, grid.ct());
        break;
      case QueryCategory::kSmall:
        q.x = Draw(rng, grid.cx(), 1);
        q.y = Draw(rng, grid.cy(), 1);
        q.t = Draw(rng, grid.ct(), 1);
        break;
      case QueryCategory::kLarge:
        q.x = Draw(rng, grid.cx(), kLargeQuerySide);
        q.y = Draw(rng, grid.cy(), kLargeQuerySide);
        q.t = Draw(rng, grid.ct(), kLargeQuerySide);
        break;
    }
    out.push_back(q);
  }
  return out;
}

MreSummary EvaluateWorkload(const ConsumptionMatrix& truth,
                            const ConsumptionMatrix& published,
                            std::span<const RangeQuery> queries, double tau) {
  if (truth.provenance() != Provenance::kRaw) {
    throw std::invalid_argument("ground truth must be the raw matrix");
  }
  if (published.provenance() != Provenance::kSanitized) {
    throw std::invalid_argument("only sanitized matrices can be evaluated");
  }
  if (!(truth.grid() == published.grid())) {
    throw std::invalid_argument("truth and published shapes differ");
  }
  for (const RangeQuery& q : queries) ValidateQuery(q, truth.grid());
  const std::vector<double> exact = kernels::AnswerQueries(truth, queries);
  const std::vector<double> noisy = kernels::AnswerQueries(published, queries);
  MreSummary s;
  double total = 0.0;
  for (size_t i = 0; i < queries.size(); ++i) {
    if (const auto e = Mre(exact[i], noisy[i], tau)) {
      total += *e;
      ++s.evaluated;
    } else {
      ++s.excluded;
    }
  }
  s.mean_mre = s.evaluated ? total / static_cast<double>(s.evaluated) : 0.0;
  return s;
}

}  // namespace gridpriv
