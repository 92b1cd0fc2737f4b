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

#include "gridpriv/csv_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace gridpriv {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void Fail(size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T ParseNumber(std::string_view field, size_t line_no, const char* name) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      field.empty()) {
    Fail(line_no, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return value;
}

// Reads the header and checks it against `expected`. Returns false on an
// empty stream.
bool ExpectHeader(std::istream& in, std::string_view expected) {
  std::string line;
  if (!std::getline(in, line)) return false;
  if (Trim(line) != expected) {
    throw ParseError("line 1: expected header '" + std::string(expected) +
                     "', got '" + std::string(Trim(line)) + "'");
  }
  return true;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

HouseholdDataset ReadHouseholdsCsv(std::istream& in) {
  if (!ExpectHeader(in, "household_id,x,y,t,kwh")) {
    throw ParseError("empty household file");
  }
  struct Partial {
    int x, y;
    std::map<int, double> readings;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Partial> by_id;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 5) Fail(line_no, "expected 5 fields");
    if (f[0].empty()) Fail(line_no, "empty household_id");
    const std::string id(f[0]);
    const int x = ParseNumber<int>(f[1], line_no, "x");
    const int y = ParseNumber<int>(f[2], line_no, "y");
    const int t = ParseNumber<int>(f[3], line_no, "t");
    const double kwh = ParseNumber<double>(f[4], line_no, "kwh");
    if (t < 0) Fail(line_no, "negative t");
    if (!std::isfinite(kwh) || kwh < 0.0)
      Fail(line_no, "reading must be finite and >= 0");
    auto [it, fresh] = by_id.try_emplace(id, Partial{x, y, {}});
    if (fresh) order.push_back(id);
    Partial& p = it->second;
    if (p.x != x || p.y != y)
      Fail(line_no, "household " + id + " changes cell");
    if (!p.readings.emplace(t, kwh).second) {
      Fail(line_no, "duplicate reading for household " + id +
                        " at t=" + std::to_string(t));
    }
  }
  HouseholdDataset out;
  out.reserve(order.size());
  std::optional<size_t> length;
  for (const std::string& id : order) {
    Partial& p = by_id.at(id);
    const size_t len = p.readings.size();
    if (p.readings.rbegin()->first != static_cast<int>(len) - 1) {
      throw ParseError("household " + id + " is missing intervals");
    }
    if (length && *length != len) {
      throw ParseError("household " + id + " has " + std::to_string(len) +
                       " intervals, expected " + std::to_string(*length));
    }
    length = len;
    HouseholdRecord rec{id, p.x, p.y, {}};
    rec.readings.reserve(len);
    for (const auto& [t, v] : p.readings) rec.readings.push_back(v);
    out.push_back(std::move(rec));
  }
  return out;
}

HouseholdDataset ReadHouseholdsCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadHouseholdsCsv(in);
}

void WriteHouseholdsCsv(std::ostream& out, const HouseholdDataset& dataset) {
  out << "household_id,x,y,t,kwh\n" << std::setprecision(17);
  for (const HouseholdRecord& h : dataset) {
    for (size_t t = 0; t < h.readings.size(); ++t) {
      out << h.id << ',' << h.x << ',' << h.y << ',' << t << ','
          << h.readings[t] << '\n';
    }
  }
}

void WriteHouseholdsCsv(const std::string& path,
                        const HouseholdDataset& dataset) {
  std::ofstream out = OpenOut(path);
  WriteHouseholdsCsv(out, dataset);
}

nlohmann::json ToJson(const MatrixMetadata& meta) {
  nlohmann::json j = {
      {"grid",
       {{"cx", meta.grid.cx()},
        {"cy", meta.grid.cy()},
        {"ct", meta.grid.ct()}}},
      {"provenance", std::string(ProvenanceName(meta.provenance))},
      {"eps_consumed", meta.eps_consumed},
      {"extra", meta.extra},
  };
  if (meta.normalization) {
    j["normalization"] = {{"global_min", meta.normalization->global_min},
                          {"global_max", meta.normalization->global_max}};
  } else {
    j["normalization"] = nullptr;
  }
  return j;
}

MatrixMetadata MetadataFromJson(const nlohmann::json& j) {
  MatrixMetadata meta;
  const auto& g = j.at("grid");
  meta.grid = GridSpec(g.at("cx").get<int>(), g.at("cy").get<int>(),
                       g.at("ct").get<int>());
  meta.provenance = ParseProvenance(j.at("provenance").get<std::string>());
  meta.eps_consumed = j.value("eps_consumed", 0.0);
  if (j.contains("normalization") && !j["normalization"].is_null()) {
    meta.normalization =
        NormalizationParams{j["normalization"].at("global_min").get<double>(),
                            j["normalization"].at("global_max").get<double>()};
  }
  if (j.contains("extra")) meta.extra = j["extra"];
  return meta;
}

void WriteMatrixCsv(std::ostream& out, const ConsumptionMatrix& matrix) {
  const GridSpec& g = matrix.grid();
  out << "x,y,t,value\n" << std::setprecision(17);
  for (int x = 0; x < g.cx(); ++x) {
    for (int y = 0; y < g.cy(); ++y) {
      for (int t = 0; t < g.ct(); ++t) {
        out << x << ',' << y << ',' << t << ',' << matrix.at(x, y, t) << '\n';
      }
    }
  }
}

void WriteMatrix(const std::string& path, const ConsumptionMatrix& matrix,
                 const MatrixMetadata& meta) {
  if (!(meta.grid == matrix.grid()) || meta.provenance != matrix.provenance()) {
    throw std::invalid_argument("metadata does not describe the matrix");
  }
  {
    std::ofstream out = OpenOut(path);
    WriteMatrixCsv(out, matrix);
  }
  std::ofstream side = OpenOut(path + ".json");
  side << ToJson(meta).dump(2) << '\n';
}

ConsumptionMatrix ReadMatrixCsv(std::istream& in, const GridSpec& grid,
                                Provenance provenance) {
  if (!ExpectHeader(in, "x,y,t,value")) throw ParseError("empty matrix file");
  std::vector<double> cells(grid.size(), 0.0);
  std::vector<char> seen(grid.size(), 0);
  std::string line;
  size_t line_no = 1;
  size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 4) Fail(line_no, "expected 4 fields");
    const int x = ParseNumber<int>(f[0], line_no, "x");
    const int y = ParseNumber<int>(f[1], line_no, "y");
    const int t = ParseNumber<int>(f[2], line_no, "t");
    const double v = ParseNumber<double>(f[3], line_no, "value");
    if (x < 0 || x >= grid.cx() || y < 0 || y >= grid.cy() || t < 0 ||
        t >= grid.ct()) {
      Fail(line_no, "cell outside the grid");
    }
    const size_t idx = grid.Index(x, y, t);
    if (seen[idx]) Fail(line_no, "duplicate cell");
    seen[idx] = 1;
    cells[idx] = v;
    ++count;
  }
  if (count != grid.size()) {
    throw ParseError("matrix file has " + std::to_string(count) +
                     " cells, expected " + std::to_string(grid.size()));
  }
  return ConsumptionMatrix(grid, provenance, std::move(cells));
}

LoadedMatrix ReadMatrix(const std::string& path) {
  std::ifstream side = OpenIn(path + ".json");
  MatrixMetadata meta = MetadataFromJson(nlohmann::json::parse(side));
  std::ifstream in = OpenIn(path);
  ConsumptionMatrix m = ReadMatrixCsv(in, meta.grid, meta.provenance);
  return {std::move(m), std::move(meta)};
}

void WriteWorkloadCsv(std::ostream& out,
                      const std::vector<WorkloadEntry>& queries) {
  out << "category,x_lo,x_hi,y_lo,y_hi,t_lo,t_hi\n";
  for (const WorkloadEntry& e : queries) {
    const RangeQuery& q = e.query;
    out << e.category << ',' << q.x.lo << ',' << q.x.hi << ',' << q.y.lo << ','
        << q.y.hi << ',' << q.t.lo << ',' << q.t.hi << '\n';
  }
}

std::vector<WorkloadEntry> ReadWorkloadCsv(std::istream& in) {
  if (!ExpectHeader(in, "category,x_lo,x_hi,y_lo,y_hi,t_lo,t_hi")) {
    throw ParseError("empty workload file");
  }
  std::vector<WorkloadEntry> out;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 7) Fail(line_no, "expected 7 fields");
    WorkloadEntry e;
    e.category = std::string(f[0]);
    e.query.x = {ParseNumber<int>(f[1], line_no, "x_lo"),
                 ParseNumber<int>(f[2], line_no, "x_hi")};
    e.query.y = {ParseNumber<int>(f[3], line_no, "y_lo"),
                 ParseNumber<int>(f[4], line_no, "y_hi")};
    e.query.t = {ParseNumber<int>(f[5], line_no, "t_lo"),
                 ParseNumber<int>(f[6], line_no, "t_hi")};
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace gridpriv
