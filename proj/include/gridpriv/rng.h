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

#ifndef GRIDPRIV_RNG_H_
#define GRIDPRIV_RNG_H_

#include <cstdint>
#include <random>

namespace gridpriv {

// Seedable 64-bit generator used for every random draw in the library.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are computed here from raw engine words rather than
// through <random> distribution classes, whose algorithms are
// implementation-defined, so that a (seed, stream) pair yields the same
// numbers on every platform.
//
// Independent streams are derived by mixing the stream id into the seed with
// SplitMix64. Parallel kernels give each work item (pillar, partition, series)
// its own stream, which keeps results independent of the thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);

  uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double UniformOpen01();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);

  // Uniform integer in [0, n). Unbiased (rejection sampling).
  uint64_t UniformInt(uint64_t n);

  // Standard normal via Box-Muller.
  double Normal();

  // Exponential with the given mean.
  double Exponential(double mean);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

uint64_t SplitMix64(uint64_t x);

// Seed for a named sub-stream of `seed`; used to give pipeline stages
// non-overlapping randomness from one master seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t salt);

}  // namespace gridpriv

#endif  // GRIDPRIV_RNG_H_
