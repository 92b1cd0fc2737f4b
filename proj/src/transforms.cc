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

#include "gridpriv/transforms.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace gridpriv {
namespace {

// FFTW planning is not thread-safe; execution with a private plan is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

std::vector<std::complex<double>> RunFft(std::vector<std::complex<double>> data,
                                         int sign) {
  const int n = static_cast<int>(data.size());
  std::vector<std::complex<double>> out(data.size());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(data.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= norm;
  return out;
}

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<std::complex<double>> Dft(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("empty series");
  return RunFft(std::vector<std::complex<double>>(x.begin(), x.end()),
                FFTW_FORWARD);
}

std::vector<double> InverseDftReal(std::span<const std::complex<double>> x) {
  if (x.empty()) throw std::invalid_argument("empty spectrum");
  const auto full = RunFft(
      std::vector<std::complex<double>>(x.begin(), x.end()), FFTW_BACKWARD);
  std::vector<double> out(full.size());
  for (size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
  return out;
}

bool KeepsFrequency(size_t j, size_t n, size_t k) {
  return std::min(j, n - j) < k;
}

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> HaarForward(std::span<const double> x) {
  if (!IsPowerOfTwo(x.size())) {
    throw std::invalid_argument("Haar transform needs a power-of-two length");
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> tmp(x.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (size_t len = x.size(); len > 1; len /= 2) {
    const size_t half = len / 2;
    for (size_t i = 0; i < half; ++i) {
      tmp[i] = (cur[2 * i] + cur[2 * i + 1]) * r;
      tmp[half + i] = (cur[2 * i] - cur[2 * i + 1]) * r;
    }
    std::copy(tmp.begin(), tmp.begin() + len, cur.begin());
  }
  return cur;
}

std::vector<double> HaarInverse(std::span<const double> coeffs) {
  if (!IsPowerOfTwo(coeffs.size())) {
    throw std::invalid_argument("Haar transform needs a power-of-two length");
  }
  std::vector<double> cur(coeffs.begin(), coeffs.end());
  std::vector<double> tmp(coeffs.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (size_t len = 2; len <= coeffs.size(); len *= 2) {
    const size_t half = len / 2;
    for (size_t i = 0; i < half; ++i) {
      tmp[2 * i] = (cur[i] + cur[half + i]) * r;
      tmp[2 * i + 1] = (cur[i] - cur[half + i]) * r;
    }
    std::copy(tmp.begin(), tmp.begin() + len, cur.begin());
  }
  return cur;
}

}  // namespace gridpriv
