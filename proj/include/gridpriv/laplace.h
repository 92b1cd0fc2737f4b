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

#ifndef GRIDPRIV_LAPLACE_H_
#define GRIDPRIV_LAPLACE_H_

#include <string>

#include "gridpriv/ledger.h"
#include "gridpriv/rng.h"

namespace gridpriv {

// Draw from Lap(0, scale) by inverse CDF:
//   u ~ U(-1/2, 1/2),  x = -scale * sign(u) * ln(1 - 2|u|).
// Throws std::invalid_argument unless scale > 0.
double LaplaceSample(double scale, Rng& rng);

// Noise scale b = sensitivity / epsilon.
double LaplaceScale(double sensitivity, double epsilon);

// Which ledger entry a mechanism invocation books.
struct ChargeSpec {
  std::string label;
  Composition composition = Composition::kSequentialTime;
  Phase phase = Phase::kSanitize;
  std::string group;  // parallel composition only
};

// value + Lap(sensitivity / epsilon). The charge is booked before the noise is
// drawn; BudgetExhaustedError leaves the ledger and rng untouched.
double LaplaceMechanism(double value, double sensitivity, double epsilon,
                        Rng& rng, BudgetLedger& ledger,
                        const ChargeSpec& charge);

// Books `charge` at `epsilon` against the ledger.
void Book(BudgetLedger& ledger, const ChargeSpec& charge, double epsilon);

}  // namespace gridpriv

#endif  // GRIDPRIV_LAPLACE_H_
