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

#include "cdenoise/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cdenoise/error.hpp"
#include "cdenoise/rng.hpp"

namespace cdenoise {

namespace {

void render_scene(GrayImage& img, Rng& rng) {
  const double w = static_cast<double>(img.width);
  const double h = static_cast<double>(img.height);
  const double scale = std::min(w, h);
  std::fill(img.pixels.begin(), img.pixels.end(), 0.3 + 0.4 * rng.uniform());

  const auto shapes = 8 + rng.index(8);
  for (std::uint64_t s = 0; s < shapes; ++s) {
    const auto kind = rng.index(3);
    const double level = 0.1 + 0.8 * rng.uniform();
    const double cx = w * rng.uniform();
    const double cy = h * rng.uniform();
    const double extent = scale * (0.1 + 0.3 * rng.uniform());
    const double aspect = 0.5 + rng.uniform();
    const double angle = std::numbers::pi * rng.uniform();
    for (std::size_t r = 0; r < img.height; ++r) {
      for (std::size_t c = 0; c < img.width; ++c) {
        const double dx = static_cast<double>(c) + 0.5 - cx;
        const double dy = static_cast<double>(r) + 0.5 - cy;
        bool inside = false;
        switch (kind) {
          case 0:  // axis-aligned rectangle
            inside = std::abs(dx) <= extent * 0.5 && std::abs(dy) <= extent * 0.5 * aspect;
            break;
          case 1:  // disc
            inside = dx * dx + dy * dy <= 0.25 * extent * extent;
            break;
          default:  // oriented half-plane clipped to a band
            inside = std::abs(dx * std::cos(angle) + dy * std::sin(angle)) <= extent * 0.25 &&
                     std::abs(-dx * std::sin(angle) + dy * std::cos(angle)) <= extent;
            break;
        }
        if (inside) img.at(r, c) = level;
      }
    }
  }
}

void add_texture(GrayImage& img, double amplitude, Rng& rng) {
  const double angle = std::numbers::pi * rng.uniform();
  const double period = 4.0 + 8.0 * rng.uniform();
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const double fx = std::cos(angle) * 2.0 * std::numbers::pi / period;
  const double fy = std::sin(angle) * 2.0 * std::numbers::pi / period;
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c)
      img.at(r, c) += amplitude * std::sin(fx * double(c) + fy * double(r) + phase);
}

}  // namespace

double pixel_correlation(const GrayImage& a, const GrayImage& b) {
  if (a.size() != b.size() || a.size() == 0)
    fail(Errc::DimensionMismatch, "images differ in size");
  const double count = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a.pixels[i];
    mb += b.pixels[i];
  }
  ma /= count;
  mb /= count;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.pixels[i] - ma;
    const double db = b.pixels[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return saa == sbb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

SynthPair synth_pair(std::size_t width, std::size_t height, std::uint64_t seed,
                     double unique_amplitude) {
  if (width < 16 || height < 16) fail(Errc::InvalidArgument, "synthetic images need >= 16x16");
  if (!(unique_amplitude >= 0.0))
    fail(Errc::InvalidArgument, "unique amplitude must be non-negative");
  Rng rng(seed);
  GrayImage common(width, height);
  render_scene(common, rng);

  SynthPair out{common, common, 0.0};
  if (unique_amplitude > 0.0) {
    add_texture(out.target, unique_amplitude, rng);
    add_texture(out.guide, unique_amplitude, rng);
  }
  out.correlation = pixel_correlation(out.target, out.guide);
  if (!(out.correlation > 0.5))
    fail(Errc::InvalidArgument, "unique amplitude " + std::to_string(unique_amplitude) +
                                    " swamps the shared structure (correlation " +
                                    std::to_string(out.correlation) + ")");
  return out;
}

}  // namespace cdenoise
