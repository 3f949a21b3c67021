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

#include "cdenoise/metrics.hpp"

#include <cmath>
#include <limits>

#include "cdenoise/error.hpp"

namespace cdenoise {

namespace {

void require_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height || a.size() != b.size())
    fail(Errc::DimensionMismatch, "images differ in size");
}

}  // namespace

double rmse(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b);
  if (a.size() == 0) fail(Errc::InvalidArgument, "empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

double psnr(const GrayImage& a, const GrayImage& b) {
  const double e = rmse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(1.0 / e);
}

QualityReport report(const GrayImage& ref, const GrayImage& test) {
  const double e = rmse(ref, test);
  return {e, e == 0.0 ? std::numeric_limits<double>::infinity() : 20.0 * std::log10(1.0 / e)};
}

QualityReport average_report(std::span<const std::pair<GrayImage, GrayImage>> pairs) {
  if (pairs.empty()) fail(Errc::EmptyList, "no image pairs to average");
  QualityReport acc;
  for (const auto& [ref, test] : pairs) {
    const auto r = report(ref, test);
    acc.rmse += r.rmse;
    acc.psnr_db += r.psnr_db;
  }
  const auto count = static_cast<double>(pairs.size());
  acc.rmse /= count;
  acc.psnr_db /= count;
  return acc;
}

}  // namespace cdenoise
