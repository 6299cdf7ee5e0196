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

#include "aigc/rng.hpp"
#include "aigc/similarity.hpp"

namespace aigc::sim {

using similarity::GrayImage;

constexpr std::uint32_t kImageSize = 64;

/// Smooth low-frequency random field: two octaves of bilinearly interpolated
/// random control grids (5x5 and 9x9, the finer one at half amplitude),
/// contrast-stretched to the full 0..255 range.
GrayImage generate_base(Rng& rng);

/// source + round(sigma * N(0, 1)) per pixel, clamped to 0..255.
GrayImage generate_noised(const GrayImage& source, double sigma, Rng& rng);

/// A fresh base image drawn from a stream derived from `rng`, so it shares
/// no draws with any image the caller made from `rng` itself.
GrayImage generate_independent(Rng& rng);

}  // namespace aigc::sim
