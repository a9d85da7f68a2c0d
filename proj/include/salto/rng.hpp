// Copyright 2026 The Saltolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace salto {

// splitmix64 stream. Self-contained so that seeded results are bit-identical
// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) { state_ = seed; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; consumes exactly two uniforms per call.
  double gaussian(double mean = 0.0, double stddev = 1.0) {
    const double u1 = std::max(uniform01(), 0x1.0p-100);
    const double u2 = uniform01();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
  }

  // Derives an independent stream, e.g. one per environment instance.
  Rng spawn(std::uint64_t stream) const {
    Rng child(state_ ^ (0x94d049bb133111ebull * (stream + 1)));
    child.next_u64();
    return child;
  }

 private:
  static constexpr double kTau = 6.28318530717958647692;
  std::uint64_t state_ = 0;
};

}  // namespace salto
