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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aigc/crypto.hpp"
#include "aigc/result.hpp"

namespace aigc::similarity {

/// 8-bit grayscale image, row-major.
class GrayImage {
 public:
  /// Throws std::invalid_argument unless width, height >= 1 and
  /// pixels.size() == width * height.
  GrayImage(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels);
  /// Constant-valued image.
  GrayImage(std::uint32_t width, std::uint32_t height, std::uint8_t fill);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::uint8_t at(std::uint32_t row, std::uint32_t col) const { return pixels_[row * width_ + col]; }
  std::uint8_t& at(std::uint32_t row, std::uint32_t col) { return pixels_[row * width_ + col]; }
  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

  /// Rotated 90 degrees clockwise.
  GrayImage rotated90() const;

  bool operator==(const GrayImage&) const = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint8_t> pixels_;
};

/// Binary PGM (P5, maxval 255).
Bytes encode_pgm(const GrayImage& img);
Expected<GrayImage> decode_pgm(std::span<const std::uint8_t> data);

/// Bilinear resample with pixel-centre alignment and edge clamping.
///
/// Output pixel (r, c) samples the source at
///   sx = (c + 0.5) * W / W' - 0.5,  sy = (r + 0.5) * H / H' - 0.5
/// clamped to [0, W-1] x [0, H-1]; with x0 = floor(sx), x1 = min(x0 + 1, W - 1),
/// fx = sx - x0 (and likewise for y) the value is
///   (1-fy)((1-fx) p[y0][x0] + fx p[y0][x1]) + fy((1-fx) p[y1][x0] + fx p[y1][x1]).
/// Results are kept in double precision; nothing is rounded.
std::vector<double> resize_bilinear(const GrayImage& img, std::uint32_t out_width,
                                    std::uint32_t out_height);

struct Hash64 {
  std::uint64_t bits = 0;
  bool operator==(const Hash64&) const = default;
};

/// Popcount of the XOR.
int hamming(Hash64 a, Hash64 b) noexcept;

struct SimilarityThresholds {
  double histogram_min = 0.90;
  int phash_max_distance = 10;
  int dhash_max_distance = 10;

  bool valid() const noexcept {
    return histogram_min >= 0.0 && histogram_min <= 1.0 && phash_max_distance >= 0 &&
           phash_max_distance <= 64 && dhash_max_distance >= 0 && dhash_max_distance <= 64;
  }
  bool operator==(const SimilarityThresholds&) const = default;
};

/// (histogram intersection, 1 - phash distance / 64, 1 - dhash distance / 64)
struct SimilarityTuple {
  double histogram = 0.0;
  double phash = 0.0;
  double dhash = 0.0;
  bool operator==(const SimilarityTuple&) const = default;
};

constexpr int kHistogramBins = 64;

/// 64-bin intensity histogram normalised to sum 1.
std::vector<double> histogram(const GrayImage& img);

/// Histogram intersection of the normalised 64-bin histograms; in [0, 1].
double histogram_similarity(const GrayImage& a, const GrayImage& b);

/// 8x8 low-frequency block of the orthonormal 2-D DCT-II of the 32x32
/// bilinear resample, row-major (vertical frequency major). Coefficients are
/// quantised to 1e-6 so exact zeros stay zero.
std::vector<double> phash_coefficients(const GrayImage& img);

/// DCT hash: bit (8u + v) is set iff coefficient (u, v) exceeds the median of
/// the 63 AC coefficients. The DC term is excluded from the median but still
/// contributes its own bit.
Hash64 phash(const GrayImage& img);

/// Difference hash on the 9x8 resample: bit (8r + c) set iff pixel (r, c+1) > pixel (r, c).
Hash64 dhash(const GrayImage& img);

struct DuplicateReport {
  bool verdict = false;
  SimilarityTuple tuple;
  int passed = 0;
};

/// Two-of-three duplicate decision.
DuplicateReport is_duplicate(const GrayImage& a, const GrayImage& b, const SimilarityThresholds& t);

}  // namespace aigc::similarity
