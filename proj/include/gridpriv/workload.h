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

#ifndef GRIDPRIV_WORKLOAD_H_
#define GRIDPRIV_WORKLOAD_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridpriv/matrix.h"

namespace gridpriv {

enum class QueryCategory { kRandom, kSmall, kLarge };

std::string_view CategoryName(QueryCategory c);
QueryCategory ParseCategory(std::string_view name);

// Side length of the fixed-size categories.
inline constexpr int kLargeQuerySide = 10;

// `count` queries of one category, positions uniform over all valid
// placements. Random queries draw each axis extent uniformly from
// [1, axis size]. Throws std::invalid_argument if a large query does not fit.
std::vector<RangeQuery> GenerateQueries(QueryCategory category, int count,
                                        const GridSpec& grid, uint64_t seed);

struct MreSummary {
  double mean_mre = 0.0;  // percent, over evaluated queries
  size_t evaluated = 0;
  size_t excluded = 0;  // true answer <= tau
};

// Scores `published` against `truth`. `truth` must be raw and `published`
// sanitized; shapes must match.
MreSummary EvaluateWorkload(const ConsumptionMatrix& truth,
                            const ConsumptionMatrix& published,
                            std::span<const RangeQuery> queries,
                            double tau = kMreTau);

}  // namespace gridpriv

#endif  // GRIDPRIV_WORKLOAD_H_
