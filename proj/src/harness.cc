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

#include "gridpriv/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <stdexcept>

#include "gridpriv/baselines.h"
#include "gridpriv/rng.h"
#include "gridpriv/stpt.h"

namespace gridpriv {
namespace {

constexpr double kBudgetTolerance = 1e-9;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

std::string MechanismSpec::Name() const {
  switch (kind) {
    case MechanismKind::kStpt:
      return "stpt";
    case MechanismKind::kIdentity:
      return "identity";
    case MechanismKind::kFourier:
      return "fourier-" + std::to_string(k);
    case MechanismKind::kWavelet:
      return "wavelet-" + std::to_string(k);
    case MechanismKind::kKalman:
      return "kalman";
  }
  return "?";
}

MechanismSpec MechanismSpec::Parse(std::string_view name) {
  if (name == "stpt") return {MechanismKind::kStpt, 0};
  if (name == "identity") return {MechanismKind::kIdentity, 0};
  if (name == "kalman") return {MechanismKind::kKalman, 0};
  for (const auto& [prefix, kind] :
       {std::pair{std::string_view("fourier-"), MechanismKind::kFourier},
        std::pair{std::string_view("wavelet-"), MechanismKind::kWavelet}}) {
    if (name.substr(0, prefix.size()) == prefix) {
      const std::string digits(name.substr(prefix.size()));
      size_t used = 0;
      int k = 0;
      try {
        k = std::stoi(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != digits.size() || k < 1) break;
      return {kind, k};
    }
  }
  throw std::invalid_argument(
      "unknown mechanism '" + std::string(name) +
      "' (expected stpt, identity, kalman, fourier-<k>, wavelet-<k>)");
}

void BenchmarkConfig::Validate() const {
  if (std::abs(eps_total - (eps_pattern + eps_sanitize)) >
      kBudgetTolerance * std::max(1.0, eps_total)) {
    throw std::invalid_argument(
        "eps_total must equal eps_pattern + eps_sanitize");
  }
  if (!(eps_pattern > 0.0) || !(eps_sanitize > 0.0)) {
    throw std::invalid_argument("phase budgets must be positive");
  }
  if (t_train < 1 || t_test < 1) {
    throw std::invalid_argument("t_train and t_test must be >= 1");
  }
  GridSpec(grid, grid, horizon());
  if (reps < 1 || queries < 0 || households < 1 || k_quant < 1) {
    throw std::invalid_argument("reps, households, k_quant must be >= 1");
  }
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be positive");
  if (depth < -1) throw std::invalid_argument("depth must be >= 0");
  ParsePatternInput(pattern_input);
  ParsePatternMode(pattern_mode);
  model.Validate();
}

nlohmann::json ToJson(const BenchmarkConfig& c) {
  nlohmann::json placements = nlohmann::json::array();
  for (Placement p : c.placements) placements.push_back(PlacementName(p));
  nlohmann::json mechanisms = nlohmann::json::array();
  for (const MechanismSpec& m : c.mechanisms) mechanisms.push_back(m.Name());
  nlohmann::json workloads = nlohmann::json::array();
  for (QueryCategory w : c.workloads) workloads.push_back(CategoryName(w));
  const ModelConfig& m = c.model;
  const ConsumerModel& u = c.consumer;
  return {
      {"eps_total", c.eps_total},
      {"eps_pattern", c.eps_pattern},
      {"eps_sanitize", c.eps_sanitize},
      {"t_train", c.t_train},
      {"t_test", c.t_test},
      {"grid", c.grid},
      {"reps", c.reps},
      {"queries", c.queries},
      {"households", c.households},
      {"clip", c.clip},
      {"k_quant", c.k_quant},
      {"depth", c.depth},
      {"pattern_input", c.pattern_input},
      {"pattern_mode", c.pattern_mode},
      {"kalman_process_factor", c.kalman_process_factor},
      {"clamp_output", c.clamp_output},
      {"seed", c.seed},
      {"placements", placements},
      {"mechanisms", mechanisms},
      {"workloads", workloads},
      {"model",
       {{"window", m.window},
        {"embedding_dim", m.embedding_dim},
        {"hidden_dim", m.hidden_dim},
        {"epochs", m.epochs},
        {"batch_size", m.batch_size},
        {"learning_rate", m.learning_rate},
        {"rms_decay", m.rms_decay},
        {"rms_epsilon", m.rms_epsilon}}},
      {"consumer",
       {{"intervals_per_day", u.intervals_per_day},
        {"mean_scale", u.mean_scale},
        {"scale_sigma", u.scale_sigma},
        {"daily", u.daily},
        {"weekly", u.weekly},
        {"phase_jitter", u.phase_jitter},
        {"regional_phase", u.regional_phase},
        {"noise", u.noise},
        {"spike_prob", u.spike_prob},
        {"spike_mean", u.spike_mean}}},
  };
}

uint64_t ConfigHash(const BenchmarkConfig& config) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToJson(config).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Publication PublishWithMechanism(const MechanismSpec& mechanism,
                                 const ConsumptionMatrix& cons,
                                 const BenchmarkConfig& config, uint64_t seed) {
  const int t0 = config.t_train;
  const int t1 = cons.grid().ct();
  if (t0 >= t1) throw std::invalid_argument("no publish window");
  const auto start = std::chrono::steady_clock::now();
  nlohmann::json extra = {{"mechanism", mechanism.Name()}};

  if (mechanism.kind == MechanismKind::kStpt) {
    BudgetLedger ledger(config.eps_pattern, config.eps_sanitize);
    StptConfig sc;
    sc.eps_pattern = config.eps_pattern;
    sc.eps_sanitize = config.eps_sanitize;
    sc.t_train = config.t_train;
    sc.k_quant = config.k_quant;
    if (config.depth >= 0) sc.depth = config.depth;
    sc.pattern_input = ParsePatternInput(config.pattern_input);
    sc.pattern_mode = ParsePatternMode(config.pattern_mode);
    sc.clip = config.clip;
    sc.clamp_output = config.clamp_output;
    sc.model = config.model;
    sc.seed = seed;
    StptResult r = RunStpt(cons, sc, ledger);
    nlohmann::json parts = nlohmann::json::array();
    for (const PartitionReport& p : r.reports) {
      parts.push_back({{"bucket", p.bucket},
                       {"size", p.size},
                       {"sensitivity", p.sensitivity},
                       {"epsilon", p.epsilon}});
    }
    extra["k"] = config.k_quant;
    extra["partition_count"] = r.reports.size();
    extra["partitions"] = parts;
    extra["training_samples"] = r.training_samples;
    extra["train_seconds"] = r.train_seconds;
    return {std::move(r.published), std::move(ledger), extra, Seconds(start)};
  }

  BudgetLedger ledger = BudgetLedger::SinglePhase(config.eps_total);
  const ConsumptionMatrix window = cons.TimeWindow(t0, t1);
  std::optional<ConsumptionMatrix> out;
  switch (mechanism.kind) {
    case MechanismKind::kIdentity: {
      const NormalizedMatrix norm = MinMaxNormalize(cons);
      const NormalizationParams& p = norm.params;
      const double sens = config.clip / (p.global_max - p.global_min);
      out = IdentitySanitize({norm.matrix.TimeWindow(t0, t1), p},
                             config.eps_total, ledger, seed, sens);
      extra["cell_sensitivity"] = sens;
      break;
    }
    case MechanismKind::kFourier:
      out = FourierSanitize(window, mechanism.k, config.eps_total, config.clip,
                            ledger, seed);
      extra["k"] = mechanism.k;
      break;
    case MechanismKind::kWavelet:
      out = WaveletSanitize(window, mechanism.k, config.eps_total, config.clip,
                            ledger, seed);
      extra["k"] = mechanism.k;
      break;
    case MechanismKind::kKalman: {
      const double q = config.kalman_process_factor * config.clip;
      out = KalmanSanitizeMatrix(window, config.eps_total, config.clip, ledger,
                                 seed, q * q);
      extra["process_variance"] = q * q;
      break;
    }
    case MechanismKind::kStpt:
      break;
  }
  ConsumptionMatrix published =
      config.clamp_output ? ClampNegative(*out) : std::move(*out);
  return {std::move(published), std::move(ledger), extra, Seconds(start)};
}

double BenchmarkReport::Average(Placement placement, std::string_view mechanism,
                                std::string_view workload) const {
  double total = 0.0;
  int n = 0;
  for (const ReportRow& r : rows) {
    if (r.placement == placement && r.mechanism == mechanism &&
        r.workload == workload && r.status == "ok") {
      total += r.mean_mre;
      ++n;
    }
  }
  return n ? total / n : std::numeric_limits<double>::quiet_NaN();
}

bool BenchmarkReport::AllLedgersOk() const {
  for (const ReportRow& r : rows) {
    if (!r.ledger_ok) return false;
  }
  return true;
}

uint64_t RepetitionSeed(uint64_t master, int rep, Placement placement) {
  return DeriveSeed(DeriveSeed(master, static_cast<uint64_t>(rep)),
                    static_cast<uint64_t>(placement) + 1);
}

ConsumptionMatrix SynthMatrix(const BenchmarkConfig& config,
                              Placement placement, uint64_t seed) {
  PlacementSpec spec;
  spec.distribution = placement;
  spec.households = config.households;
  spec.grid_side = config.grid;
  spec.seed = seed;
  const HouseholdDataset data = ClipReadings(
      SynthHouseholds(spec, config.consumer, config.horizon()), config.clip);
  return BuildConsumptionMatrix(
      data, GridSpec(config.grid, config.grid, config.horizon()));
}

BenchmarkReport RunBenchmark(const BenchmarkConfig& config) {
  config.Validate();
  const auto& w = config.workloads;
  if (std::find(w.begin(), w.end(), QueryCategory::kLarge) != w.end() &&
      (config.grid < kLargeQuerySide || config.t_test < kLargeQuerySide)) {
    throw std::invalid_argument(
        "large queries need grid and t_test of at least " +
        std::to_string(kLargeQuerySide));
  }
  const int placements = static_cast<int>(config.placements.size());
  const int jobs = config.reps * placements;
  std::vector<std::vector<ReportRow>> per_job(jobs);

#pragma omp parallel for schedule(dynamic, 1)
  for (int job = 0; job < jobs; ++job) {
    const int rep = job / placements;
    const Placement placement = config.placements[job % placements];
    const uint64_t seed = RepetitionSeed(config.seed, rep, placement);
    const ConsumptionMatrix cons = SynthMatrix(config, placement, seed);
    const ConsumptionMatrix truth =
        cons.TimeWindow(config.t_train, config.horizon());
    std::vector<std::vector<RangeQuery>> workloads;
    for (QueryCategory w : config.workloads) {
      workloads.push_back(GenerateQueries(w, config.queries, truth.grid(),
                                          DeriveSeed(seed, 0x9e7)));
    }
    for (size_t m = 0; m < config.mechanisms.size(); ++m) {
      const MechanismSpec& mech = config.mechanisms[m];
      ReportRow base;
      base.rep = rep;
      base.placement = placement;
      base.mechanism = mech.Name();
      try {
        const Publication pub = PublishWithMechanism(
            mech, cons, config, DeriveSeed(seed, 0x100 + m));
        base.runtime_seconds = pub.seconds;
        base.eps_consumed = pub.ledger.TotalSpent();
        base.ledger_ok = std::abs(base.eps_consumed - config.eps_total) <=
                         kBudgetTolerance * std::max(1.0, config.eps_total);
        for (size_t w = 0; w < config.workloads.size(); ++w) {
          ReportRow row = base;
          row.workload = CategoryName(config.workloads[w]);
          const MreSummary s =
              EvaluateWorkload(truth, pub.matrix, workloads[w]);
          row.mean_mre = s.mean_mre;
          row.evaluated = s.evaluated;
          row.excluded = s.excluded;
          per_job[job].push_back(row);
        }
      } catch (const std::exception& e) {
        for (QueryCategory w : config.workloads) {
          ReportRow row = base;
          row.workload = CategoryName(w);
          row.mean_mre = std::numeric_limits<double>::quiet_NaN();
          row.status = std::string("failed: ") + e.what();
          per_job[job].push_back(row);
        }
      }
    }
  }

  BenchmarkReport report;
  report.master_seed = config.seed;
  report.config_hash = ConfigHash(config);
  for (auto& rows : per_job) {
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

void WriteReportCsv(std::ostream& out, const BenchmarkReport& report,
                    const BenchmarkConfig& config) {
  if (!report.AllLedgersOk()) {
    throw std::runtime_error(
        "refusing to render report: a mechanism did not consume exactly its "
        "budget");
  }
  auto clean = [](std::string s) {
    for (char& c : s) {
      if (c == ',' || c == '\n') c = ';';
    }
    return s;
  };
  out << "# master_seed=" << report.master_seed << '\n'
      << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0')
      << report.config_hash << std::dec << std::setfill(' ') << '\n'
      << "rep,placement,mechanism,workload,mean_mre,evaluated,excluded,"
         "runtime_s,eps_consumed,status\n"
      << std::setprecision(10);
  for (const ReportRow& r : report.rows) {
    out << r.rep << ',' << PlacementName(r.placement) << ',' << r.mechanism
        << ',' << r.workload << ',' << r.mean_mre << ',' << r.evaluated << ','
        << r.excluded << ',' << r.runtime_seconds << ',' << r.eps_consumed
        << ',' << clean(r.status) << '\n';
  }
  for (Placement p : config.placements) {
    for (const MechanismSpec& m : config.mechanisms) {
      for (QueryCategory w : config.workloads) {
        double runtime = 0.0;
        double eps = 0.0;
        size_t evaluated = 0;
        size_t excluded = 0;
        int n = 0;
        for (const ReportRow& r : report.rows) {
          if (r.placement != p || r.mechanism != m.Name() ||
              r.workload != CategoryName(w) || r.status != "ok") {
            continue;
          }
          runtime += r.runtime_seconds;
          eps += r.eps_consumed;
          evaluated += r.evaluated;
          excluded += r.excluded;
          ++n;
        }
        const double avg = report.Average(p, m.Name(), CategoryName(w));
        out << "mean," << PlacementName(p) << ',' << m.Name() << ','
            << CategoryName(w) << ',' << avg << ',' << evaluated << ','
            << excluded << ',' << (n ? runtime / n : 0.0) << ','
            << (n ? eps / n : 0.0) << ',' << (n ? "ok" : "failed") << '\n';
      }
    }
  }
}

}  // namespace gridpriv
