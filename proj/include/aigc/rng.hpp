// Copyright 2026 The aigc-chain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace aigc {

/// Seeded random stream with platform-independent distributions.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// distributions are implemented here because the std:: ones are
/// implementation-defined and would break cross-platform replay.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Independent child stream derived from this seed and a label.
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ULL;
    for (char c : label) h = mix(h ^ static_cast<unsigned char>(c));
    h = mix(h ^ index);
    return Rng(mix(h));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller (one value per call, the sibling is discarded).
  double gaussian() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::array<std::uint8_t, 32> bytes32() {
    std::array<std::uint8_t, 32> out;
    for (int w = 0; w < 4; ++w) {
      std::uint64_t v = eng_();
      for (int i = 0; i < 8; ++i) out[8 * w + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return out;
  }

  template <class It>
  void shuffle(It first, It last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace aigc
