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

#ifndef GRIDPRIV_BASELINES_H_
#define GRIDPRIV_BASELINES_H_

// Comparison mechanisms. Each series-level function perturbs one pillar's
// time series; the matrix-level wrappers run it over every pillar with
// Rng(seed, pillar) and book the budget.

#include <cstdint>
#include <span>
#include <vector>

#include "gridpriv/ledger.h"
#include "gridpriv/matrix.h"
#include "gridpriv/rng.h"

namespace gridpriv {

// Independent Lap(cell_sensitivity * C_t / eps_tot) noise on every cell of a
// normalized matrix, then mapped back to raw units. Books C_t sequential
// charges of eps_tot / C_t (cells of one time slice hold disjoint
// individuals). With raw readings clipped at `clip`, one household moves a
// normalized cell by at most clip / (max - min); pass that as
// cell_sensitivity for the tight calibration.
ConsumptionMatrix IdentitySanitize(const NormalizedMatrix& normalized,
                                   double eps_tot, BudgetLedger& ledger,
                                   uint64_t seed,
                                   double cell_sensitivity = 1.0);

// Low-pass Fourier perturbation. Keeps frequencies with min(j, N - j) < k
// (DC plus k - 1 conjugate pairs), perturbs each of the m kept real
// parameters with Lap(sqrt(m) * l2_sensitivity / eps), and inverts.
// `l2_sensitivity` bounds the Euclidean change of the whole series.
// Throws std::invalid_argument unless 1 <= k <= N.
std::vector<double> FourierPerturb(std::span<const double> series, int k,
                                   double eps, double l2_sensitivity, Rng& rng);

enum class WaveletSelection {
  // The k coarsest coefficients. Data-independent.
  kCoarsest,
  // The k largest magnitudes, ties to the lower index. The choice itself
  // depends on the data and is not covered by the noise; for analysis only.
  kLargestMagnitude,
};

// Haar perturbation: zero-pads to a power of two P, keeps k coefficients,
// adds Lap(sqrt(k) * l2_sensitivity / eps) to each, inverts and truncates.
// Throws std::invalid_argument unless 1 <= k <= P.
std::vector<double> WaveletPerturb(
    std::span<const double> series, int k, double eps, double l2_sensitivity,
    Rng& rng, WaveletSelection selection = WaveletSelection::kCoarsest);

// Perturb-then-filter: every point gets Lap(sensitivity * T / eps), then a
// scalar random-walk Kalman filter with measurement variance
// 2 (sensitivity T / eps)^2 and the given process variance smooths the
// noisy series. Returns the filtered estimates.
std::vector<double> KalmanSanitize(std::span<const double> series, double eps,
                                   double sensitivity, Rng& rng,
                                   double process_variance);

// Matrix wrappers over raw consumption clipped at `clip`. A pillar's series
// moves by at most clip per step, so the Fourier and wavelet wrappers use
// l2_sensitivity = clip * sqrt(C_t) and book one parallel charge per pillar;
// the Kalman wrapper books C_t sequential charges like Identity.
ConsumptionMatrix FourierSanitize(const ConsumptionMatrix& cons, int k,
                                  double eps_tot, double clip,
                                  BudgetLedger& ledger, uint64_t seed);
ConsumptionMatrix WaveletSanitize(const ConsumptionMatrix& cons, int k,
                                  double eps_tot, double clip,
                                  BudgetLedger& ledger, uint64_t seed);
ConsumptionMatrix KalmanSanitizeMatrix(const ConsumptionMatrix& cons,
                                       double eps_tot, double clip,
                                       BudgetLedger& ledger, uint64_t seed,
                                       double process_variance);

}  // namespace gridpriv

#endif  // GRIDPRIV_BASELINES_H_
