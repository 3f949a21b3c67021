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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace cdenoise {

// Single-channel raster on the normalized scale (8-bit 255 -> 1.0).
// Values may leave [0, 1] after noise injection; nothing clamps them
// except `encode_image`.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, double fill = 0.0);
  GrayImage(std::size_t w, std::size_t h, std::vector<double> px);

  std::size_t size() const noexcept { return pixels.size(); }
  double& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
  double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }

  bool operator==(const GrayImage&) const = default;
};

// Interleaved R, G, B samples on the normalized scale.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> samples;
};

struct NoiseSpec {
  double sigma = 0.0;  // 8-bit units
  std::uint64_t seed = 0;
};

using DecodedImage = std::variant<GrayImage, RgbImage>;

// Binary P5 / P6 with maxval 255.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);

// Always emits P5. Pixels are clamped to [0, 1] and rounded half away from zero.
std::vector<std::uint8_t> encode_image(const GrayImage& img);

// BT.601 luma.
GrayImage rgb_to_intensity(const RgbImage& rgb);

// Adds i.i.d. N(0, (sigma/255)^2) noise. No clamping.
GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec);

GrayImage clamp_unit(const GrayImage& img);

// Unclamped float sidecar: "CDR1", u32 width, u32 height, f64 pixels (all LE).
std::vector<std::uint8_t> encode_raw(const GrayImage& img);
GrayImage decode_raw(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Reads P5, P6 (reduced to intensity) or CDR1, dispatching on the magic.
GrayImage read_gray(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_raw(const std::filesystem::path& path, const GrayImage& img);

}  // namespace cdenoise
