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

// gridpriv command-line interface.
//
//   gridpriv synth    --out households.csv [--households N --placement P]
//   gridpriv ingest   --in households.csv --out raw.csv
//   gridpriv sanitize --in households.csv --mechanism stpt --out release.csv
//   gridpriv query    --matrix release.csv [--truth raw.csv] [--workload q.csv]
//   gridpriv bench    --out report.csv
//
// Options may also come from `--config FILE`, a flat `key=value` file whose
// keys are the long flag names; flags on the command line win.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridpriv/csv_io.h"
#include "gridpriv/harness.h"
#include "gridpriv/matrix.h"
#include "gridpriv/rnn.h"
#include "gridpriv/synth.h"
#include "gridpriv/workload.h"

namespace gridpriv {
namespace {

struct Options {
  BenchmarkConfig bench;
  std::optional<double> eps_total;
  std::optional<double> eps_pattern;
  std::optional<double> eps_sanitize;
  std::string placement = "uniform";
  std::string mechanism = "stpt";
  std::vector<std::string> mechanisms;
  std::vector<std::string> placements;
  std::string in;
  std::string out;
  std::string audit;
  std::string matrix;
  std::string truth;
  std::string workload;
  std::string category = "random";
  std::string emit_workload;
  std::string checkpoint;
};

// Resolves the three budget flags: any two determine the third; a lone
// total keeps the default one-third / two-thirds split.
void ResolveBudgets(Options& o) {
  BenchmarkConfig& b = o.bench;
  if (o.eps_pattern && o.eps_sanitize) {
    b.eps_pattern = *o.eps_pattern;
    b.eps_sanitize = *o.eps_sanitize;
    b.eps_total = o.eps_total.value_or(b.eps_pattern + b.eps_sanitize);
  } else if (o.eps_total) {
    b.eps_total = *o.eps_total;
    if (o.eps_pattern) {
      b.eps_pattern = *o.eps_pattern;
      b.eps_sanitize = b.eps_total - b.eps_pattern;
    } else if (o.eps_sanitize) {
      b.eps_sanitize = *o.eps_sanitize;
      b.eps_pattern = b.eps_total - b.eps_sanitize;
    } else {
      b.eps_pattern = b.eps_total / 3.0;
      b.eps_sanitize = b.eps_total - b.eps_pattern;
    }
  } else if (o.eps_pattern || o.eps_sanitize) {
    throw std::invalid_argument(
        "give --eps-total with one phase budget, or both phase budgets");
  }
  b.Validate();
}

void Require(const std::string& value, const char* flag, const char* cmd) {
  if (value.empty()) {
    throw std::invalid_argument(std::string(cmd) + " requires " + flag);
  }
}

// Households from --in, clipped, and their raw matrix.
ConsumptionMatrix LoadRaw(const Options& o, HouseholdDataset* households) {
  HouseholdDataset data = ClipReadings(ReadHouseholdsCsv(o.in), o.bench.clip);
  if (data.empty()) throw std::invalid_argument("no households in " + o.in);
  const int length = static_cast<int>(data.front().readings.size());
  ConsumptionMatrix m = BuildConsumptionMatrix(
      data, GridSpec(o.bench.grid, o.bench.grid, length));
  if (households) *households = std::move(data);
  return m;
}

int CmdSynth(const Options& o) {
  Require(o.out, "--out", "synth");
  PlacementSpec spec;
  spec.distribution = ParsePlacement(o.placement);
  spec.households = o.bench.households;
  spec.grid_side = o.bench.grid;
  spec.seed = o.bench.seed;
  const HouseholdDataset data =
      SynthHouseholds(spec, o.bench.consumer, o.bench.horizon());
  WriteHouseholdsCsv(o.out, data);
  std::printf("wrote %zu households x %d intervals to %s\n", data.size(),
              o.bench.horizon(), o.out.c_str());
  return 0;
}

int CmdIngest(const Options& o) {
  Require(o.in, "--in", "ingest");
  HouseholdDataset data;
  const ConsumptionMatrix m = LoadRaw(o, &data);
  std::printf("households=%zu grid=%dx%dx%d total=%.6f max_cell=%.6f\n",
              data.size(), m.grid().cx(), m.grid().cy(), m.grid().ct(),
              m.Total(), m.Max());
  if (!o.out.empty()) {
    MatrixMetadata meta;
    meta.grid = m.grid();
    meta.provenance = Provenance::kRaw;
    meta.extra = {{"households", data.size()}, {"clip", o.bench.clip}};
    WriteMatrix(o.out, m, meta);
    std::printf("wrote raw matrix to %s\n", o.out.c_str());
  }
  return 0;
}

int CmdSanitize(const Options& o) {
  Require(o.in, "--in", "sanitize");
  Require(o.out, "--out", "sanitize");
  const ConsumptionMatrix cons = LoadRaw(o, nullptr);
  BenchmarkConfig config = o.bench;
  config.t_test = cons.grid().ct() - config.t_train;
  if (config.t_test < 1) {
    throw std::invalid_argument("series shorter than t_train + 1");
  }
  const MechanismSpec mech = MechanismSpec::Parse(o.mechanism);
  const Publication pub = PublishWithMechanism(mech, cons, config, config.seed);

  MatrixMetadata meta;
  meta.grid = pub.matrix.grid();
  meta.provenance = Provenance::kSanitized;
  meta.eps_consumed = pub.ledger.TotalSpent();
  meta.extra = pub.extra;
  meta.extra["t_begin"] = config.t_train;
  meta.extra["eps_total"] = config.eps_total;
  WriteMatrix(o.out, pub.matrix, meta);
  if (!o.audit.empty()) {
    std::ofstream audit(o.audit);
    pub.ledger.WriteAuditCsv(audit);
  }
  std::printf("%s: published %dx%dx%d, eps consumed %.12g of %.12g (%.2fs)\n",
              mech.Name().c_str(), meta.grid.cx(), meta.grid.cy(),
              meta.grid.ct(), meta.eps_consumed, config.eps_total, pub.seconds);
  return 0;
}

int CmdQuery(const Options& o) {
  Require(o.matrix, "--matrix", "query");
  const LoadedMatrix published = ReadMatrix(o.matrix);
  if (published.meta.provenance != Provenance::kSanitized) {
    throw std::invalid_argument("query only runs against sanitized matrices");
  }
  std::vector<WorkloadEntry> entries;
  if (!o.workload.empty()) {
    std::ifstream in(o.workload);
    if (!in) throw std::runtime_error("cannot open " + o.workload);
    entries = ReadWorkloadCsv(in);
  } else {
    const QueryCategory c = ParseCategory(o.category);
    for (const RangeQuery& q : GenerateQueries(
             c, o.bench.queries, published.matrix.grid(), o.bench.seed)) {
      entries.push_back({std::string(CategoryName(c)), q});
    }
  }
  if (!o.emit_workload.empty()) {
    std::ofstream out(o.emit_workload);
    WriteWorkloadCsv(out, entries);
  }
  std::vector<RangeQuery> queries;
  for (const WorkloadEntry& e : entries) queries.push_back(e.query);

  if (o.truth.empty()) {
    std::printf("category,x_lo,x_hi,y_lo,y_hi,t_lo,t_hi,answer\n");
    for (const WorkloadEntry& e : entries) {
      const RangeQuery& q = e.query;
      std::printf("%s,%d,%d,%d,%d,%d,%d,%.10g\n", e.category.c_str(), q.x.lo,
                  q.x.hi, q.y.lo, q.y.hi, q.t.lo, q.t.hi,
                  AnswerRangeQuery(published.matrix, q));
    }
    return 0;
  }
  LoadedMatrix truth = ReadMatrix(o.truth);
  ConsumptionMatrix window = truth.matrix;
  const int t_begin = published.meta.extra.value("t_begin", 0);
  if (!(truth.matrix.grid() == published.matrix.grid())) {
    window = truth.matrix.TimeWindow(t_begin,
                                     t_begin + published.matrix.grid().ct());
  }
  const MreSummary s = EvaluateWorkload(window, published.matrix, queries);
  std::printf("queries=%zu evaluated=%zu excluded=%zu mean_mre=%.6f%%\n",
              queries.size(), s.evaluated, s.excluded, s.mean_mre);
  return 0;
}

int CmdBench(const Options& o) {
  BenchmarkConfig config = o.bench;
  if (!o.mechanisms.empty()) {
    config.mechanisms.clear();
    for (const std::string& m : o.mechanisms) {
      config.mechanisms.push_back(MechanismSpec::Parse(m));
    }
  }
  if (!o.placements.empty()) {
    config.placements.clear();
    for (const std::string& p : o.placements) {
      config.placements.push_back(ParsePlacement(p));
    }
  }
  const BenchmarkReport report = RunBenchmark(config);
  if (o.out.empty()) {
    WriteReportCsv(std::cout, report, config);
  } else {
    std::ofstream out(o.out);
    WriteReportCsv(out, report, config);
    std::printf("wrote %zu rows to %s\n", report.rows.size(), o.out.c_str());
  }
  for (const ReportRow& r : report.rows) {
    if (r.status != "ok") {
      std::fprintf(stderr, "rep %d %s %s: %s\n", r.rep, r.mechanism.c_str(),
                   r.workload.c_str(), r.status.c_str());
      return 2;
    }
  }
  return 0;
}

}  // namespace
}  // namespace gridpriv

int main(int argc, char** argv) {
  using namespace gridpriv;
  Options o;
  BenchmarkConfig& b = o.bench;
  CLI::App app{"Differentially private release of gridded consumption data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file; keys are flag names");

  app.add_option("--eps-total", o.eps_total, "Total privacy budget");
  app.add_option("--eps-pattern", o.eps_pattern, "Pattern-phase budget");
  app.add_option("--eps-sanitize", o.eps_sanitize, "Release-phase budget");
  app.add_option("--k-quant", b.k_quant, "Quantization levels")
      ->capture_default_str();
  app.add_option("--depth", b.depth, "Quadtree depth (-1: log2(grid) / 2)")
      ->capture_default_str();
  app.add_option("--window", b.model.window, "Model input window")
      ->capture_default_str();
  app.add_option("--t-train", b.t_train, "Training prefix length")
      ->capture_default_str();
  app.add_option("--t-test", b.t_test, "Publish window length (synth, bench)")
      ->capture_default_str();
  app.add_option("--grid", b.grid, "Grid side (power of two)")
      ->capture_default_str();
  app.add_option("--seed", b.seed, "Master seed")->capture_default_str();
  app.add_option("--reps", b.reps, "Benchmark repetitions")
      ->capture_default_str();
  app.add_option("--queries", b.queries, "Queries per workload")
      ->capture_default_str();
  app.add_option("--households", b.households, "Synthetic household count")
      ->capture_default_str();
  app.add_option("--clip", b.clip, "Per-reading clipping factor (kWh)")
      ->capture_default_str();
  app.add_option("--epochs", b.model.epochs, "Training epochs")
      ->capture_default_str();
  app.add_option("--batch-size", b.model.batch_size, "Training batch size")
      ->capture_default_str();
  app.add_option("--learning-rate", b.model.learning_rate, "RMSProp step size")
      ->capture_default_str();
  app.add_option("--hidden", b.model.hidden_dim, "GRU hidden size")
      ->capture_default_str();
  app.add_option("--embedding", b.model.embedding_dim, "Input embedding size")
      ->capture_default_str();
  app.add_option("--kalman-process", b.kalman_process_factor,
                 "Kalman process std as a multiple of clip")
      ->capture_default_str();
  app.add_option("--pattern-input", b.pattern_input,
                 "Pattern-stage cell scale: log, linear or minmax");
  app.add_option("--pattern-mode", b.pattern_mode,
                 "Publish-window pattern: anchored, level or rollout");
  app.add_flag("--clamp-output", b.clamp_output,
               "Clamp published cells at zero");
  app.add_option("--placement", o.placement, "uniform | normal (synth)")
      ->capture_default_str();
  app.add_option("--placements", o.placements, "Placements to benchmark");
  app.add_option("--mechanism", o.mechanism,
                 "stpt | identity | kalman | fourier-<k> | wavelet-<k>")
      ->capture_default_str();
  app.add_option("--mechanisms", o.mechanisms, "Mechanisms to benchmark");
  app.add_option("--in", o.in, "Household CSV");
  app.add_option("--out", o.out, "Output path");
  app.add_option("--audit", o.audit, "Ledger audit CSV (sanitize)");
  app.add_option("--matrix", o.matrix, "Published matrix CSV (query)");
  app.add_option("--truth", o.truth, "Raw matrix CSV to score against (query)");
  app.add_option("--workload", o.workload, "Workload CSV (query)");
  app.add_option("--category", o.category, "random | small | large (query)")
      ->capture_default_str();
  app.add_option("--emit-workload", o.emit_workload,
                 "Write the workload used (query)");

  auto* synth =
      app.add_subcommand("synth", "Generate a synthetic household CSV");
  auto* ingest = app.add_subcommand(
      "ingest", "Validate a household CSV and build its matrix");
  auto* sanitize =
      app.add_subcommand("sanitize", "Release one matrix with one mechanism");
  auto* query =
      app.add_subcommand("query", "Answer or score a workload on a release");
  auto* bench = app.add_subcommand("bench", "Full synthetic benchmark sweep");
  for (CLI::App* sub : {synth, ingest, sanitize, query, bench})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    ResolveBudgets(o);
    if (*synth) return CmdSynth(o);
    if (*ingest) return CmdIngest(o);
    if (*sanitize) return CmdSanitize(o);
    if (*query) return CmdQuery(o);
    if (*bench) return CmdBench(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
