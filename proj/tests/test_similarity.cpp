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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aigc/sim/images.hpp"
#include "aigc/similarity.hpp"

using namespace aigc;
using namespace aigc::similarity;

namespace {

GrayImage seeded(std::uint64_t seed) {
  Rng rng(seed);
  return sim::generate_base(rng);
}

// Direct O(N^4) DCT-II of the full block, kept separate from the library's separable version.
double brute_dct(const std::vector<double>& f, int n, int u, int v) {
  double s = 0.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      s += f[y * n + x] * std::cos(std::numbers::pi * (2 * y + 1) * u / (2.0 * n)) *
           std::cos(std::numbers::pi * (2 * x + 1) * v / (2.0 * n));
  const double au = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  const double av = v == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return au * av * s;
}

}  // namespace

TEST_CASE("image construction validates dimensions") {
  CHECK_THROWS_AS(GrayImage(0, 3, std::uint8_t{0}), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
  GrayImage img(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(img.at(1, 0) == 4);
  const auto r = img.rotated90();
  CHECK(r.width() == 2);
  CHECK(r.height() == 3);
  CHECK(r.at(0, 0) == 4);
  CHECK(r.at(0, 1) == 1);
  CHECK(r.at(2, 1) == 3);
  CHECK(r.rotated90().rotated90().rotated90() == img);
}

TEST_CASE("pgm round trip and rejection") {
  const auto img = seeded(3);
  const auto bytes = encode_pgm(img);
  auto back = decode_pgm(bytes);
  REQUIRE(back);
  CHECK(*back == img);

  const std::string with_comment = "P5\n# note\n2 1\n255\n\x01\x02";
  auto c = decode_pgm(std::span(reinterpret_cast<const std::uint8_t*>(with_comment.data()), with_comment.size()));
  REQUIRE(c);
  CHECK(c->at(0, 1) == 2);

  for (std::string bad : {std::string("P2\n2 1\n255\n\x01\x02"), std::string("P5\n2 1\n255\n\x01"),
                          std::string("P5\n2 1\n65535\n\x01\x02"), std::string("P5\n0 1\n255\n")}) {
    auto r = decode_pgm(std::span(reinterpret_cast<const std::uint8_t*>(bad.data()), bad.size()));
    CHECK_FALSE(r);
  }
}

TEST_CASE("bilinear resize: identity and hand-computed upsampling") {
  const auto img = seeded(4);
  const auto same = resize_bilinear(img, img.width(), img.height());
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(same[i] == doctest::Approx(img.pixels()[i]).epsilon(1e-12));

  GrayImage two(2, 1, std::vector<std::uint8_t>{0, 100});
  const auto up = resize_bilinear(two, 4, 1);
  // sx = (c + 0.5) / 2 - 0.5 -> -0.25, 0.25, 0.75, 1.25 clamped to [0, 1]
  CHECK(up[0] == doctest::Approx(0.0));
  CHECK(up[1] == doctest::Approx(25.0));
  CHECK(up[2] == doctest::Approx(75.0));
  CHECK(up[3] == doctest::Approx(100.0));
}

TEST_CASE("histogram intersection") {
  const auto a = seeded(5);
  const auto b = seeded(6);
  CHECK(histogram_similarity(a, a) == 1.0);
  CHECK(histogram_similarity(a, b) == histogram_similarity(b, a));
  CHECK(histogram_similarity(GrayImage(4, 4, std::uint8_t{0}), GrayImage(4, 4, std::uint8_t{255})) == 0.0);
  // bins: {0-3}, {4-7}; a = [0,0,4,4], b = [0,4,4,4] -> min(2/4,1/4) + min(2/4,3/4) = 0.75
  GrayImage x(4, 1, std::vector<std::uint8_t>{0, 0, 4, 4});
  GrayImage y(4, 1, std::vector<std::uint8_t>{0, 4, 4, 4});
  CHECK(histogram_similarity(x, y) == 0.75);
  const auto h = histogram(a);
  REQUIRE(h.size() == kHistogramBins);
  double sum = 0;
  for (double v : h) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("separable DCT matches the direct formula") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto img = seeded(seed);
    const auto f = resize_bilinear(img, 32, 32);
    const auto coeffs = phash_coefficients(img);
    REQUIRE(coeffs.size() == 64);
    for (int u = 0; u < 8; ++u)
      for (int v = 0; v < 8; ++v) CHECK(std::abs(coeffs[u * 8 + v] - brute_dct(f, 32, u, v)) <= 1e-6);
  }
}

TEST_CASE("hash bit layouts on simple images") {
  GrayImage flat(16, 16, std::uint8_t{128});
  CHECK(phash(flat).bits == 1u);  // only the DC term exceeds the zero median
  CHECK(dhash(flat).bits == 0u);

  std::vector<std::uint8_t> ramp(16 * 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) ramp[r * 16 + c] = static_cast<std::uint8_t>(c * 16);
  GrayImage grad(16, 16, ramp);
  CHECK(dhash(grad).bits == ~std::uint64_t{0});
  CHECK(dhash(grad.rotated90().rotated90()).bits == 0u);
  CHECK(hamming(Hash64{0b1011}, Hash64{0b0001}) == 2);
}

TEST_CASE("noise level zero is the identity; rotation breaks dhash") {
  const auto img = seeded(9);
  Rng rng(1);
  CHECK(sim::generate_noised(img, 0.0, rng) == img);
  CHECK(hamming(dhash(img), dhash(img.rotated90())) > 16);
}

TEST_CASE("default thresholds separate copies from unrelated images") {
  int noised_hits = 0;
  int independent_hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::derive(seed, "similarity-test");
    const auto base = sim::generate_base(rng);
    CHECK(is_duplicate(base, base, {}).passed == 3);
    noised_hits += is_duplicate(base, sim::generate_noised(base, 8.0, rng), {}).verdict;
    independent_hits += is_duplicate(base, sim::generate_independent(rng), {}).verdict;
  }
  CHECK(noised_hits >= 19);
  CHECK(independent_hits <= 1);
}
