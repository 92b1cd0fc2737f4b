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

#ifndef GRIDPRIV_TRANSFORMS_H_
#define GRIDPRIV_TRANSFORMS_H_

// Orthonormal transforms used by the transform-domain baselines. Both
// preserve the Euclidean norm, so a truncated reconstruction misses exactly
// the energy of the dropped coefficients.

#include <complex>
#include <span>
#include <vector>

namespace gridpriv {

// X_j = N^{-1/2} sum_t x_t exp(-2 pi i j t / N). Backed by FFTW.
std::vector<std::complex<double>> Dft(std::span<const double> x);

// Inverse of Dft; returns the real part.
std::vector<double> InverseDftReal(std::span<const std::complex<double>> x);

// Frequency index j is kept by a k-term low-pass iff min(j, N - j) < k. The
// set is closed under conjugate pairing, so the reconstruction is real.
bool KeepsFrequency(size_t j, size_t n, size_t k);

// Smallest power of two >= n (n >= 1).
size_t NextPowerOfTwo(size_t n);

// Orthonormal Haar transform of a power-of-two length series. Output order
// is coarse to fine: [approximation, level-1 detail, 2 level-2 details, ...].
// Throws std::invalid_argument for other lengths.
std::vector<double> HaarForward(std::span<const double> x);
std::vector<double> HaarInverse(std::span<const double> coeffs);

}  // namespace gridpriv

#endif  // GRIDPRIV_TRANSFORMS_H_
