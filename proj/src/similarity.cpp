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

#include "aigc/similarity.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aigc::similarity {

__extension__ using u128 = unsigned __int128;

GrayImage::GrayImage(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) throw std::invalid_argument("image dimensions must be >= 1");
  if (pixels_.size() != std::size_t{width_} * height_)
    throw std::invalid_argument("pixel count does not match dimensions");
}

GrayImage::GrayImage(std::uint32_t width, std::uint32_t height, std::uint8_t fill)
    : GrayImage(width, height, std::vector<std::uint8_t>(std::size_t{width} * height, fill)) {}

GrayImage GrayImage::rotated90() const {
  std::vector<std::uint8_t> out(pixels_.size());
  // new image is height_ wide, width_ tall
  for (std::uint32_t r = 0; r < height_; ++r)
    for (std::uint32_t c = 0; c < width_; ++c) out[c * height_ + (height_ - 1 - r)] = at(r, c);
  return GrayImage(height_, width_, std::move(out));
}

Bytes encode_pgm(const GrayImage& img) {
  std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                       "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

Expected<GrayImage> decode_pgm(std::span<const std::uint8_t> data) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(data[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&]() -> long {
    skip_space();
    long v = 0;
    std::size_t start = pos;
    while (pos < data.size() && std::isdigit(data[pos]) && pos - start < 9) v = v * 10 + (data[pos++] - '0');
    return pos == start ? -1 : v;
  };

  if (data.size() < 2 || data[0] != 'P' || data[1] != '5') return Errc::DecodeFailure;
  pos = 2;
  long w = read_uint();
  long h = read_uint();
  long maxval = read_uint();
  if (w <= 0 || h <= 0 || maxval != 255) return Errc::DecodeFailure;
  if (pos >= data.size() || !std::isspace(data[pos])) return Errc::DecodeFailure;
  ++pos;  // exactly one whitespace byte before the raster
  const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (data.size() - pos != count) return Errc::DecodeFailure;
  return GrayImage(static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h),
                   std::vector<std::uint8_t>(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end()));
}

std::vector<double> resize_bilinear(const GrayImage& img, std::uint32_t out_width,
                                    std::uint32_t out_height) {
  const double sx_scale = static_cast<double>(img.width()) / out_width;
  const double sy_scale = static_cast<double>(img.height()) / out_height;
  const double max_x = img.width() - 1.0;
  const double max_y = img.height() - 1.0;

  std::vector<double> out(std::size_t{out_width} * out_height);
  for (std::uint32_t r = 0; r < out_height; ++r) {
    double sy = std::clamp((r + 0.5) * sy_scale - 0.5, 0.0, max_y);
    auto y0 = static_cast<std::uint32_t>(std::floor(sy));
    std::uint32_t y1 = std::min(y0 + 1, img.height() - 1);
    double fy = sy - y0;
    for (std::uint32_t c = 0; c < out_width; ++c) {
      double sx = std::clamp((c + 0.5) * sx_scale - 0.5, 0.0, max_x);
      auto x0 = static_cast<std::uint32_t>(std::floor(sx));
      std::uint32_t x1 = std::min(x0 + 1, img.width() - 1);
      double fx = sx - x0;
      double top = (1.0 - fx) * img.at(y0, x0) + fx * img.at(y0, x1);
      double bottom = (1.0 - fx) * img.at(y1, x0) + fx * img.at(y1, x1);
      out[std::size_t{r} * out_width + c] = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

int hamming(Hash64 a, Hash64 b) noexcept { return std::popcount(a.bits ^ b.bits); }

std::vector<double> histogram(const GrayImage& img) {
  std::vector<double> h(kHistogramBins, 0.0);
  for (auto p : img.pixels()) h[p >> 2] += 1.0;
  const double n = static_cast<double>(img.pixels().size());
  for (auto& v : h) v /= n;
  return h;
}

double histogram_similarity(const GrayImage& a, const GrayImage& b) {
  // Count-based so the result is exactly symmetric and exactly 1 for equal images.
  std::vector<std::uint64_t> ca(kHistogramBins, 0), cb(kHistogramBins, 0);
  for (auto p : a.pixels()) ++ca[p >> 2];
  for (auto p : b.pixels()) ++cb[p >> 2];
  const auto na = static_cast<std::uint64_t>(a.pixels().size());
  const auto nb = static_cast<std::uint64_t>(b.pixels().size());
  // min(ca/na, cb/nb) = min(ca*nb, cb*na) / (na*nb), summed exactly in integers.
  u128 acc = 0;
  for (int i = 0; i < kHistogramBins; ++i)
    acc += std::min(static_cast<u128>(ca[i]) * nb, static_cast<u128>(cb[i]) * na);
  return std::clamp(static_cast<double>(acc) / (static_cast<double>(na) * static_cast<double>(nb)), 0.0, 1.0);
}

namespace {

constexpr std::uint32_t kDctSize = 32;
constexpr std::uint32_t kDctKeep = 8;

// basis[u][x] = alpha(u) * cos(pi * (2x + 1) * u / 2N)
const std::vector<double>& dct_basis() {
  static const std::vector<double> basis = [] {
    std::vector<double> b(kDctKeep * kDctSize);
    for (std::uint32_t u = 0; u < kDctKeep; ++u) {
      double alpha = u == 0 ? std::sqrt(1.0 / kDctSize) : std::sqrt(2.0 / kDctSize);
      for (std::uint32_t x = 0; x < kDctSize; ++x)
        b[u * kDctSize + x] = alpha * std::cos(std::numbers::pi * (2.0 * x + 1.0) * u / (2.0 * kDctSize));
    }
    return b;
  }();
  return basis;
}

}  // namespace

std::vector<double> phash_coefficients(const GrayImage& img) {
  const auto pixels = resize_bilinear(img, kDctSize, kDctSize);
  const auto& basis = dct_basis();

  // rows first: tmp[y][v] = sum_x f[y][x] * basis[v][x]
  std::vector<double> tmp(kDctSize * kDctKeep, 0.0);
  for (std::uint32_t y = 0; y < kDctSize; ++y)
    for (std::uint32_t v = 0; v < kDctKeep; ++v) {
      double s = 0.0;
      for (std::uint32_t x = 0; x < kDctSize; ++x) s += pixels[y * kDctSize + x] * basis[v * kDctSize + x];
      tmp[y * kDctKeep + v] = s;
    }

  std::vector<double> coeffs(kDctKeep * kDctKeep, 0.0);
  for (std::uint32_t u = 0; u < kDctKeep; ++u)
    for (std::uint32_t v = 0; v < kDctKeep; ++v) {
      double s = 0.0;
      for (std::uint32_t y = 0; y < kDctSize; ++y) s += tmp[y * kDctKeep + v] * basis[u * kDctSize + y];
      coeffs[u * kDctKeep + v] = std::nearbyint(s * 1e6) / 1e6;
    }
  return coeffs;
}

Hash64 phash(const GrayImage& img) {
  const auto coeffs = phash_coefficients(img);
  std::vector<double> ac(coeffs.begin() + 1, coeffs.end());
  std::nth_element(ac.begin(), ac.begin() + 31, ac.end());
  const double median = ac[31];

  Hash64 h;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] > median) h.bits |= std::uint64_t{1} << i;
  return h;
}

Hash64 dhash(const GrayImage& img) {
  const auto px = resize_bilinear(img, 9, 8);
  Hash64 h;
  for (std::uint32_t r = 0; r < 8; ++r)
    for (std::uint32_t c = 0; c < 8; ++c)
      if (px[r * 9 + c + 1] > px[r * 9 + c]) h.bits |= std::uint64_t{1} << (r * 8 + c);
  return h;
}

DuplicateReport is_duplicate(const GrayImage& a, const GrayImage& b, const SimilarityThresholds& t) {
  DuplicateReport rep;
  const double hist = histogram_similarity(a, b);
  const int pd = hamming(phash(a), phash(b));
  const int dd = hamming(dhash(a), dhash(b));

  rep.tuple = {hist, 1.0 - pd / 64.0, 1.0 - dd / 64.0};
  rep.passed = (hist >= t.histogram_min) + (pd <= t.phash_max_distance) + (dd <= t.dhash_max_distance);
  rep.verdict = rep.passed >= 2;
  return rep;
}

}  // namespace aigc::similarity
