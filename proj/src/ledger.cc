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

#include "gridpriv/ledger.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace gridpriv {
namespace {

int PhaseSlot(Phase p) { return p == Phase::kPattern ? 0 : 1; }

// Slack for floating-point accumulation when comparing against a budget.
double Slack(double budget) { return 1e-12 * std::max(1.0, budget); }

}  // namespace

std::string CompositionName(Composition c) {
  return c == Composition::kSequentialTime ? "sequential-time"
                                           : "parallel-space";
}

std::string PhaseName(Phase p) {
  return p == Phase::kPattern ? "pattern" : "sanitize";
}

BudgetLedger::BudgetLedger(double eps_pattern, double eps_sanitize)
    : eps_pattern_(eps_pattern),
      eps_sanitize_(eps_sanitize),
      mu_(std::make_unique<std::mutex>()) {
  if (!(eps_pattern >= 0.0) || !(eps_sanitize >= 0.0) ||
      !(eps_pattern + eps_sanitize > 0.0)) {
    throw std::invalid_argument(
        "budgets must be non-negative with a positive total");
  }
}

BudgetLedger::BudgetLedger(BudgetLedger&&) noexcept = default;
BudgetLedger& BudgetLedger::operator=(BudgetLedger&&) noexcept = default;

double BudgetLedger::Budget(Phase phase) const {
  return phase == Phase::kPattern ? eps_pattern_ : eps_sanitize_;
}

void BudgetLedger::ChargeSequential(std::string label, double epsilon,
                                    Phase phase) {
  LedgerCharge c;
  c.label = std::move(label);
  c.epsilon = epsilon;
  c.composition = Composition::kSequentialTime;
  c.phase = phase;
  Record(std::move(c));
}

void BudgetLedger::ChargeParallel(std::string label, double epsilon,
                                  Phase phase, std::string group) {
  LedgerCharge c;
  c.label = std::move(label);
  c.epsilon = epsilon;
  c.composition = Composition::kParallelSpace;
  c.phase = phase;
  c.group = std::move(group);
  Record(std::move(c));
}

void BudgetLedger::Record(LedgerCharge charge) {
  if (!(charge.epsilon > 0.0) || !std::isfinite(charge.epsilon)) {
    throw std::invalid_argument("charge epsilon must be positive and finite");
  }
  std::lock_guard<std::mutex> lock(*mu_);
  const int slot = PhaseSlot(charge.phase);
  const double budget = Budget(charge.phase);
  double seq = sequential_[slot];
  double par = parallel_[slot];
  double new_group_max = 0.0;
  std::pair<int, std::string> key{slot, charge.group};
  if (charge.composition == Composition::kSequentialTime) {
    seq += charge.epsilon;
  } else {
    const auto it = group_max_.find(key);
    const double old_max = it == group_max_.end() ? 0.0 : it->second;
    new_group_max = std::max(old_max, charge.epsilon);
    par += new_group_max - old_max;
  }
  if (seq + par > budget + Slack(budget)) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "privacy budget exhausted in phase "
        << PhaseName(charge.phase) << ": charging " << charge.epsilon
        << " for '" << charge.label << "' would spend " << (seq + par) << " of "
        << budget;
    throw BudgetExhaustedError(msg.str());
  }
  sequential_[slot] = seq;
  parallel_[slot] = par;
  if (charge.composition == Composition::kParallelSpace) {
    group_max_[std::move(key)] = new_group_max;
  }
  charge.sequence = charges_.size();
  charges_.push_back(std::move(charge));
}

double BudgetLedger::Spent(Phase phase) const {
  std::lock_guard<std::mutex> lock(*mu_);
  const int slot = PhaseSlot(phase);
  return sequential_[slot] + parallel_[slot];
}

double BudgetLedger::TotalSpent() const {
  return Spent(Phase::kPattern) + Spent(Phase::kSanitize);
}

std::vector<LedgerCharge> BudgetLedger::charges() const {
  std::lock_guard<std::mutex> lock(*mu_);
  return charges_;
}

size_t BudgetLedger::charge_count() const {
  std::lock_guard<std::mutex> lock(*mu_);
  return charges_.size();
}

void BudgetLedger::WriteAuditCsv(std::ostream& out) const {
  std::lock_guard<std::mutex> lock(*mu_);
  out << "label,epsilon,class,phase,timestamp\n";
  out << std::setprecision(17);
  for (const LedgerCharge& c : charges_) {
    out << c.label << ',' << c.epsilon << ',' << CompositionName(c.composition)
        << ',' << PhaseName(c.phase) << ',' << c.sequence << '\n';
  }
}

}  // namespace gridpriv
