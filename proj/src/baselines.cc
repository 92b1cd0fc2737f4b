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

#include "gridpriv/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gridpriv/kernels.h"
#include "gridpriv/laplace.h"
#include "gridpriv/transforms.h"

namespace gridpriv {
namespace {

void BookTimeSlices(BudgetLedger& ledger, const std::string& name, int ct,
                    double eps_tot) {
  const double per_slice = eps_tot / ct;
  for (int t = 0; t < ct; ++t) {
    ledger.ChargeSequential(name + "/t=" + std::to_string(t), per_slice,
                            Phase::kSanitize);
  }
}

void BookPillars(BudgetLedger& ledger, const std::string& name, int pillars,
                 double eps_tot) {
  for (int p = 0; p < pillars; ++p) {
    ledger.ChargeParallel(name + "/pillar=" + std::to_string(p), eps_tot,
                          Phase::kSanitize, name);
  }
}

template <typename Fn>
ConsumptionMatrix MapPillars(const ConsumptionMatrix& cons, uint64_t seed,
                             Fn&& fn) {
  const GridSpec& g = cons.grid();
  const size_t ct = g.ct();
  std::vector<double> cells(g.size());
  kernels::ForEachPillar(g.pillars(), [&](int p) {
    Rng rng(seed, static_cast<uint64_t>(p));
    const std::vector<double> out = fn(cons.cells().subspan(p * ct, ct), rng);
    std::copy(out.begin(), out.end(), cells.begin() + p * ct);
  });
  return ConsumptionMatrix(g, Provenance::kSanitized, std::move(cells));
}

void CheckEps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

}  // namespace

ConsumptionMatrix IdentitySanitize(const NormalizedMatrix& normalized,
                                   double eps_tot, BudgetLedger& ledger,
                                   uint64_t seed, double cell_sensitivity) {
  CheckEps(eps_tot);
  const ConsumptionMatrix& m = normalized.matrix;
  if (m.provenance() != Provenance::kNormalized) {
    throw std::invalid_argument("identity expects a normalized matrix");
  }
  const int ct = m.grid().ct();
  const double scale = LaplaceScale(cell_sensitivity, eps_tot / ct);
  BookTimeSlices(ledger, "identity", ct, eps_tot);
  const ConsumptionMatrix noisy(
      m.grid(), Provenance::kSanitized,
      kernels::AddCellNoise(m.cells(), m.grid(), scale, seed));
  return Denormalize(noisy, normalized.params, Provenance::kSanitized);
}

std::vector<double> FourierPerturb(std::span<const double> series, int k,
                                   double eps, double l2_sensitivity,
                                   Rng& rng) {
  const size_t n = series.size();
  if (k < 1 || static_cast<size_t>(k) > n) {
    throw std::invalid_argument("fourier k must be in [1, series length]");
  }
  CheckEps(eps);
  std::vector<std::complex<double>> spec = Dft(series);
  size_t m = 0;
  for (size_t j = 0; j < n; ++j) m += KeepsFrequency(j, n, k) ? 1 : 0;
  const double b =
      LaplaceScale(std::sqrt(static_cast<double>(m)) * l2_sensitivity, eps);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<std::complex<double>> kept(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    if (!KeepsFrequency(j, n, k)) continue;
    const size_t mirror = (n - j) % n;
    if (mirror == j) {
      // DC, or Nyquist for even n: a single real parameter.
      kept[j] = spec[j].real() + LaplaceSample(b, rng);
    } else if (j < mirror) {
      // Conjugate pair: sqrt(2) Re and sqrt(2) Im are the orthonormal real
      // parameters.
      const double re = spec[j].real() + LaplaceSample(b, rng) * r;
      const double im = spec[j].imag() + LaplaceSample(b, rng) * r;
      kept[j] = {re, im};
      kept[mirror] = {re, -im};
    }
  }
  return InverseDftReal(kept);
}

std::vector<double> WaveletPerturb(std::span<const double> series, int k,
                                   double eps, double l2_sensitivity, Rng& rng,
                                   WaveletSelection selection) {
  const size_t n = series.size();
  if (n == 0) throw std::invalid_argument("empty series");
  const size_t padded = NextPowerOfTwo(n);
  if (k < 1 || static_cast<size_t>(k) > padded) {
    throw std::invalid_argument("wavelet k must be in [1, padded length]");
  }
  CheckEps(eps);
  std::vector<double> x(padded, 0.0);
  std::copy(series.begin(), series.end(), x.begin());
  const std::vector<double> coeffs = HaarForward(x);

  std::vector<size_t> keep(padded);
  std::iota(keep.begin(), keep.end(), size_t{0});
  if (selection == WaveletSelection::kLargestMagnitude) {
    std::stable_sort(keep.begin(), keep.end(), [&](size_t a, size_t b) {
      return std::abs(coeffs[a]) > std::abs(coeffs[b]);
    });
  }
  keep.resize(k);
  std::sort(keep.begin(), keep.end());

  const double b =
      LaplaceScale(std::sqrt(static_cast<double>(k)) * l2_sensitivity, eps);
  std::vector<double> kept(padded, 0.0);
  for (size_t i : keep) kept[i] = coeffs[i] + LaplaceSample(b, rng);
  std::vector<double> out = HaarInverse(kept);
  out.resize(n);
  return out;
}

std::vector<double> KalmanSanitize(std::span<const double> series, double eps,
                                   double sensitivity, Rng& rng,
                                   double process_variance) {
  CheckEps(eps);
  if (!(process_variance >= 0.0)) {
    throw std::invalid_argument("process variance must be >= 0");
  }
  const size_t n = series.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  const double b = LaplaceScale(sensitivity * static_cast<double>(n), eps);
  const double r = 2.0 * b * b;
  double estimate = 0.0;
  double variance = 0.0;
  for (size_t t = 0; t < n; ++t) {
    const double z = series[t] + LaplaceSample(b, rng);
    if (t == 0) {
      estimate = z;
      variance = r;
    } else {
      const double prior = variance + process_variance;
      const double gain = prior / (prior + r);
      estimate += gain * (z - estimate);
      variance = (1.0 - gain) * prior;
    }
    out[t] = estimate;
  }
  return out;
}

ConsumptionMatrix FourierSanitize(const ConsumptionMatrix& cons, int k,
                                  double eps_tot, double clip,
                                  BudgetLedger& ledger, uint64_t seed) {
  CheckEps(eps_tot);
  const int ct = cons.grid().ct();
  if (k < 1 || k > ct) throw std::invalid_argument("fourier k out of range");
  const double l2 = clip * std::sqrt(static_cast<double>(ct));
  BookPillars(ledger, "fourier", cons.grid().pillars(), eps_tot);
  return MapPillars(cons, seed, [&](std::span<const double> s, Rng& rng) {
    return FourierPerturb(s, k, eps_tot, l2, rng);
  });
}

ConsumptionMatrix WaveletSanitize(const ConsumptionMatrix& cons, int k,
                                  double eps_tot, double clip,
                                  BudgetLedger& ledger, uint64_t seed) {
  CheckEps(eps_tot);
  const int ct = cons.grid().ct();
  if (k < 1 || static_cast<size_t>(k) > NextPowerOfTwo(ct)) {
    throw std::invalid_argument("wavelet k out of range");
  }
  const double l2 = clip * std::sqrt(static_cast<double>(ct));
  BookPillars(ledger, "wavelet", cons.grid().pillars(), eps_tot);
  return MapPillars(cons, seed, [&](std::span<const double> s, Rng& rng) {
    return WaveletPerturb(s, k, eps_tot, l2, rng);
  });
}

ConsumptionMatrix KalmanSanitizeMatrix(const ConsumptionMatrix& cons,
                                       double eps_tot, double clip,
                                       BudgetLedger& ledger, uint64_t seed,
                                       double process_variance) {
  CheckEps(eps_tot);
  BookTimeSlices(ledger, "kalman", cons.grid().ct(), eps_tot);
  return MapPillars(cons, seed, [&](std::span<const double> s, Rng& rng) {
    return KalmanSanitize(s, eps_tot, clip, rng, process_variance);
  });
}

}  // namespace gridpriv
