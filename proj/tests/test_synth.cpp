// Copyright (c) the cdenoise authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdenoise/error.hpp"
#include "cdenoise/image.hpp"
#include "cdenoise/synth.hpp"

using namespace cdenoise;

TEST_CASE("synthetic pairs are correlated and seeded") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pair = synth_pair(64, 48, seed);
    CHECK(pair.target.width == 64);
    CHECK(pair.guide.height == 48);
    CHECK(pair.correlation > 0.5);
    CHECK(pair.correlation == doctest::Approx(pixel_correlation(pair.target, pair.guide)));
    for (double p : pair.target.pixels) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  const auto a = synth_pair(32, 32, 7);
  const auto b = synth_pair(32, 32, 7);
  CHECK(a.target == b.target);
  CHECK(a.guide == b.guide);
  CHECK_FALSE(synth_pair(32, 32, 8).target == a.target);
}

TEST_CASE("without unique texture both images coincide") {
  const auto pair = synth_pair(40, 40, 3, 0.0);
  CHECK(pair.target == pair.guide);
  CHECK(pair.correlation == doctest::Approx(1.0));
}

TEST_CASE("synthetic pairs need room") {
  bool threw = false;
  try {
    synth_pair(15, 64, 0);
  } catch (const Error& e) {
    threw = e.code() == Errc::InvalidArgument;
  }
  CHECK(threw);
}

TEST_CASE("pixel correlation") {
  GrayImage a(4, 1);
  a.pixels = {0.1, 0.2, 0.4, 0.8};
  GrayImage b = a;
  for (double& p : b.pixels) p = 1.0 - 2.0 * p;
  CHECK(pixel_correlation(a, a) == doctest::Approx(1.0));
  CHECK(pixel_correlation(a, b) == doctest::Approx(-1.0));
}
