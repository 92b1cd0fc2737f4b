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

#ifndef GRIDPRIV_CSV_IO_H_
#define GRIDPRIV_CSV_IO_H_

// File formats.
//
//   households   household_id,x,y,t,kwh      one row per reading
//   matrix       x,y,t,value                 one row per cell
//   workload     category,x_lo,x_hi,y_lo,y_hi,t_lo,t_hi   inclusive bounds
//
// A matrix file is accompanied by a JSON sidecar at `<path>.json`.

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridpriv/matrix.h"

namespace gridpriv {

// Thrown for malformed input files; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict reader: every household must have exactly one row for every
// t in [0, T) and a single (x, y). Rows may come in any order; households are
// returned in order of first appearance.
HouseholdDataset ReadHouseholdsCsv(std::istream& in);
HouseholdDataset ReadHouseholdsCsv(const std::string& path);
void WriteHouseholdsCsv(std::ostream& out, const HouseholdDataset& dataset);
void WriteHouseholdsCsv(const std::string& path,
                        const HouseholdDataset& dataset);

struct MatrixMetadata {
  GridSpec grid{1, 1, 1};
  Provenance provenance = Provenance::kRaw;
  std::optional<NormalizationParams> normalization;
  double eps_consumed = 0.0;
  // Mechanism-specific details (name, k, partitions, ...).
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json ToJson(const MatrixMetadata& meta);
MatrixMetadata MetadataFromJson(const nlohmann::json& j);

void WriteMatrixCsv(std::ostream& out, const ConsumptionMatrix& matrix);
// Writes `path` and `path + ".json"`.
void WriteMatrix(const std::string& path, const ConsumptionMatrix& matrix,
                 const MatrixMetadata& meta);

// Reads cells for `grid`; every cell must appear exactly once.
ConsumptionMatrix ReadMatrixCsv(std::istream& in, const GridSpec& grid,
                                Provenance provenance);

struct LoadedMatrix {
  ConsumptionMatrix matrix;
  MatrixMetadata meta;
};
// Reads `path` using the shape and provenance from its sidecar.
LoadedMatrix ReadMatrix(const std::string& path);

struct WorkloadEntry {
  std::string category;
  RangeQuery query;
};

void WriteWorkloadCsv(std::ostream& out,
                      const std::vector<WorkloadEntry>& queries);
std::vector<WorkloadEntry> ReadWorkloadCsv(std::istream& in);

}  // namespace gridpriv

#endif  // GRIDPRIV_CSV_IO_H_
