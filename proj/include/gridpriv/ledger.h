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

#ifndef GRIDPRIV_LEDGER_H_
#define GRIDPRIV_LEDGER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridpriv {

// How a charge composes with the others in its phase.
//
// Sequential charges add up. Parallel charges carry a group key; charges in
// one group touch disjoint sets of individuals, so a group costs the maximum
// of its charges, and distinct groups add up.
enum class Composition { kSequentialTime, kParallelSpace };

// The two budget pools of the pipeline. Single-mechanism baselines put their
// whole budget in kSanitize.
enum class Phase { kPattern, kSanitize };

std::string CompositionName(Composition c);
std::string PhaseName(Phase p);

struct LedgerCharge {
  std::string label;
  double epsilon = 0.0;
  Composition composition = Composition::kSequentialTime;
  Phase phase = Phase::kSanitize;
  std::string group;
  uint64_t sequence = 0;  // logical timestamp, order of acceptance
};

class BudgetExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Privacy budget accountant with eps_tot = eps_pattern + eps_sanitize.
//
// A charge that would push a phase past its budget throws
// BudgetExhaustedError and is not recorded. Charges are serialized by an
// internal mutex.
class BudgetLedger {
 public:
  BudgetLedger(double eps_pattern, double eps_sanitize);

  // Ledger with the whole budget in the sanitize phase.
  static BudgetLedger SinglePhase(double eps_total) {
    return BudgetLedger(0.0, eps_total);
  }

  BudgetLedger(BudgetLedger&&) noexcept;
  BudgetLedger& operator=(BudgetLedger&&) noexcept;

  double eps_pattern() const { return eps_pattern_; }
  double eps_sanitize() const { return eps_sanitize_; }
  double eps_total() const { return eps_pattern_ + eps_sanitize_; }
  double Budget(Phase phase) const;

  void ChargeSequential(std::string label, double epsilon, Phase phase);
  void ChargeParallel(std::string label, double epsilon, Phase phase,
                      std::string group);

  // Effective spend after composition.
  double Spent(Phase phase) const;
  double TotalSpent() const;
  double Remaining(Phase phase) const { return Budget(phase) - Spent(phase); }

  std::vector<LedgerCharge> charges() const;
  size_t charge_count() const;

  // CSV with header `label,epsilon,class,phase,timestamp`.
  void WriteAuditCsv(std::ostream& out) const;

 private:
  void Record(LedgerCharge charge);

  double eps_pattern_;
  double eps_sanitize_;
  std::unique_ptr<std::mutex> mu_;
  double sequential_[2] = {0.0, 0.0};
  double parallel_[2] = {0.0, 0.0};
  std::map<std::pair<int, std::string>, double> group_max_;
  std::vector<LedgerCharge> charges_;
};

}  // namespace gridpriv

#endif  // GRIDPRIV_LEDGER_H_
