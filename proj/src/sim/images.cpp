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

#include "aigc/sim/images.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace aigc::sim {
namespace {

void add_octave(std::vector<double>& field, Rng& rng, std::uint32_t grid, double amplitude) {
  std::vector<double> ctrl(std::size_t{grid} * grid);
  for (auto& v : ctrl) v = rng.uniform01() * amplitude;
  const double step = (kImageSize - 1.0) / (grid - 1.0);
  std::array<std::uint32_t, kImageSize> cell{};
  std::array<double, kImageSize> frac{};
  for (std::uint32_t i = 0; i < kImageSize; ++i) {
    const double g = i / step;
    cell[i] = std::min(static_cast<std::uint32_t>(g), grid - 2);
    frac[i] = g - cell[i];
  }
  for (std::uint32_t r = 0; r < kImageSize; ++r) {
    const double fy = frac[r];
    const double* row0 = &ctrl[cell[r] * grid];
    const double* row1 = row0 + grid;
    double* out = &field[r * kImageSize];
    for (std::uint32_t c = 0; c < kImageSize; ++c) {
      const auto x0 = cell[c];
      const double fx = frac[c];
      double top = (1 - fx) * row0[x0] + fx * row0[x0 + 1];
      double bot = (1 - fx) * row1[x0] + fx * row1[x0 + 1];
      out[c] += (1 - fy) * top + fy * bot;
    }
  }
}

}  // namespace

GrayImage generate_base(Rng& rng) {
  std::vector<double> field(std::size_t{kImageSize} * kImageSize, 0.0);
  add_octave(field, rng, 5, 1.0);
  add_octave(field, rng, 9, 0.5);

  auto [lo_it, hi_it] = std::minmax_element(field.begin(), field.end());
  const double lo = *lo_it;
  const double span = std::max(*hi_it - lo, 1e-12);
  std::vector<std::uint8_t> px(field.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    px[i] = static_cast<std::uint8_t>(std::lround((field[i] - lo) / span * 255.0));
  return GrayImage(kImageSize, kImageSize, std::move(px));
}

GrayImage generate_noised(const GrayImage& source, double sigma, Rng& rng) {
  if (sigma <= 0.0) return source;
  std::vector<std::uint8_t> px(source.pixels());
  for (auto& p : px) {
    long v = p + std::lround(sigma * rng.gaussian());
    p = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return GrayImage(source.width(), source.height(), std::move(px));
}

GrayImage generate_independent(Rng& rng) {
  Rng fresh(rng.next_u64() ^ 0xD1B54A32D192ED03ULL);
  return generate_base(fresh);
}

}  // namespace aigc::sim
