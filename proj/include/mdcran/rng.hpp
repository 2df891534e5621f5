// SPDX-License-Identifier: Apache-2.0
//
// mdcran: joint radio/fronthaul design for packet-based C-RAN uplinks
// Copyright (C) 2026 The mdcran authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MDCRAN_RNG_HPP
#define MDCRAN_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace mdcran {

/// SplitMix64 generator (Steele/Lea/Flood). Used everywhere a seeded draw is
/// needed so that results are reproducible bit-for-bit across platforms,
/// unlike the implementation-defined std:: distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw strictly inside (0,1); never returns an endpoint, so it is
  /// safe to take logarithms of the result.
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform draw on [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  /// One standard-normal pair via Box-Muller.
  void next_normal_pair(double& a, double& b) {
    const double two_pi = 6.283185307179586476925286766559;
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(two_pi * u2);
    b = r * std::sin(two_pi * u2);
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> next_complex_normal(double variance) {
    double re = 0.0;
    double im = 0.0;
    next_normal_pair(re, im);
    return std::sqrt(variance / 2.0) * std::complex<double>(re, im);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic substream derivation: the returned state is a pure function
/// of (seed, index), so independent workers drawing from substreams reproduce
/// a serial run exactly.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (index * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL));
  g.next();
  return g.next();
}

/// Two-index substream, e.g. (trial, route).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t i,
                                   std::uint64_t j) {
  return derive_stream(derive_stream(seed, i), j);
}

}  // namespace mdcran

#endif  // MDCRAN_RNG_HPP
