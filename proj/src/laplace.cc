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

#include "gridpriv/laplace.h"

#include <cmath>
#include <stdexcept>

namespace gridpriv {

double LaplaceSample(double scale, Rng& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("Laplace scale must be positive and finite");
  }
  const double u = rng.UniformOpen01() - 0.5;
  const double mag = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

double LaplaceScale(double sensitivity, double epsilon) {
  if (!(sensitivity > 0.0)) {
    throw std::invalid_argument("sensitivity must be positive");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return sensitivity / epsilon;
}

void Book(BudgetLedger& ledger, const ChargeSpec& charge, double epsilon) {
  if (charge.composition == Composition::kSequentialTime) {
    ledger.ChargeSequential(charge.label, epsilon, charge.phase);
  } else {
    ledger.ChargeParallel(charge.label, epsilon, charge.phase, charge.group);
  }
}

double LaplaceMechanism(double value, double sensitivity, double epsilon,
                        Rng& rng, BudgetLedger& ledger,
                        const ChargeSpec& charge) {
  const double scale = LaplaceScale(sensitivity, epsilon);
  Book(ledger, charge, epsilon);
  return value + LaplaceSample(scale, rng);
}

}  // namespace gridpriv
