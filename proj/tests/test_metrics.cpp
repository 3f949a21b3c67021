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
#include <limits>
#include <utility>
#include <vector>

#include "cdenoise/error.hpp"
#include "cdenoise/metrics.hpp"
#include "cdenoise/rng.hpp"

using namespace cdenoise;

TEST_CASE("rmse and psnr on simple fields") {
  const GrayImage a(8, 8, 0.25);
  CHECK(rmse(a, a) == 0.0);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());

  const GrayImage b(8, 8, 0.25 + 8.0 / 255.0);
  CHECK(rmse(a, b) == doctest::Approx(8.0 / 255.0).epsilon(1e-12));
  CHECK(rmse(a, b) == doctest::Approx(0.03137).epsilon(1e-4));
  CHECK(psnr(a, b) == doctest::Approx(30.07).epsilon(0.0002));

  const GrayImage c(8, 8, 0.25 + 4.0 / 255.0);
  CHECK(psnr(a, c) == doctest::Approx(36.09).epsilon(0.0002));
}

TEST_CASE("rmse of a pure noise field") {
  Rng rng(77);
  const GrayImage zero(1000, 1000, 0.0);
  GrayImage noise(1000, 1000);
  for (double& p : noise.pixels) p = (8.0 / 255.0) * rng.normal();
  CHECK(std::abs(rmse(zero, noise) - 8.0 / 255.0) <= 0.01 * 8.0 / 255.0);
}

TEST_CASE("metric properties") {
  Rng rng(1);
  GrayImage a(16, 16);
  GrayImage b(16, 16);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.pixels[i] = rng.uniform();
    b.pixels[i] = rng.uniform();
  }
  CHECK(psnr(a, b) == psnr(b, a));
  GrayImage a2 = a;
  GrayImage b2 = b;
  for (auto& p : a2.pixels) p += 0.3;
  for (auto& p : b2.pixels) p += 0.3;
  CHECK(rmse(a2, b2) == doctest::Approx(rmse(a, b)).epsilon(1e-12));

  double previous = std::numeric_limits<double>::infinity();
  for (double off : {0.01, 0.02, 0.05, 0.1}) {
    GrayImage shifted = a;
    for (auto& p : shifted.pixels) p += off;
    const double value = psnr(a, shifted);
    CHECK(value < previous);
    previous = value;
  }
}

TEST_CASE("average report averages each metric independently") {
  const GrayImage ref(4, 4, 0.0);
  const double e30 = std::pow(10.0, -30.0 / 20.0);
  const double e40 = std::pow(10.0, -40.0 / 20.0);
  std::vector<std::pair<GrayImage, GrayImage>> pairs = {{ref, GrayImage(4, 4, e30)},
                                                        {ref, GrayImage(4, 4, e40)}};
  const auto both = average_report(pairs);
  CHECK(both.psnr_db == doctest::Approx(35.0).epsilon(1e-12));
  CHECK(both.rmse == doctest::Approx((e30 + e40) / 2.0).epsilon(1e-12));
  // PSNR of the mean RMSE is not the mean PSNR.
  CHECK(20.0 * std::log10(1.0 / both.rmse) != doctest::Approx(35.0));

  const auto one = average_report(std::span(pairs).first(1));
  CHECK(one.psnr_db == doctest::Approx(30.0).epsilon(1e-12));

  bool threw = false;
  try {
    average_report({});
  } catch (const Error& e) {
    threw = e.code() == Errc::EmptyList;
  }
  CHECK(threw);
}

TEST_CASE("metrics require matching dimensions") {
  bool threw = false;
  try {
    rmse(GrayImage(2, 2), GrayImage(2, 3));
  } catch (const Error& e) {
    threw = e.code() == Errc::DimensionMismatch;
  }
  CHECK(threw);
}
