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

#include "cdenoise/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "cdenoise/error.hpp"
#include "cdenoise/rng.hpp"

namespace cdenoise {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

GrayImage::GrayImage(std::size_t w, std::size_t h, double fill)
    : width(w), height(h), pixels(w * h, fill) {
  if (w == 0 || h == 0) fail(Errc::InvalidArgument, "image dimensions must be positive");
}

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<double> px)
    : width(w), height(h), pixels(std::move(px)) {
  if (w == 0 || h == 0) fail(Errc::InvalidArgument, "image dimensions must be positive");
  if (pixels.size() != w * h) fail(Errc::DimensionMismatch, "pixel count does not match width*height");
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads one unsigned decimal token.
  std::size_t number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      fail(Errc::UnsupportedFormat, "malformed netpbm header");
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1u << 30)) fail(Errc::UnsupportedFormat, "header value too large");
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      fail(Errc::TruncatedData, "missing raster after header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    fail(Errc::UnsupportedFormat, "expected P5 or P6 magic");
  const bool rgb = bytes[1] == '6';
  HeaderReader header(bytes);
  const std::size_t width = header.number();
  const std::size_t height = header.number();
  const std::size_t maxval = header.number();
  if (maxval != 255) fail(Errc::UnsupportedFormat, "only maxval 255 is supported");
  if (width == 0 || height == 0) fail(Errc::UnsupportedFormat, "zero image dimension");
  const std::size_t offset = header.payload_offset();
  const std::size_t channels = rgb ? 3 : 1;
  const std::size_t count = width * height * channels;
  if (offset > bytes.size() || bytes.size() - offset < count)
    fail(Errc::TruncatedData, "raster shorter than width*height*channels");

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = bytes[offset + i] / 255.0;
  if (rgb) return RgbImage{width, height, std::move(values)};
  return GrayImage(width, height, std::move(values));
}

std::vector<std::uint8_t> encode_image(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.size());
  for (double p : img.pixels) {
    const double clamped = std::clamp(p, 0.0, 1.0);
    out.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0)));
  }
  return out;
}

GrayImage rgb_to_intensity(const RgbImage& rgb) {
  if (rgb.samples.size() != rgb.width * rgb.height * 3)
    fail(Errc::DimensionMismatch, "RGB raster must hold three channels per pixel");
  GrayImage out(rgb.width, rgb.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* px = &rgb.samples[3 * i];
    out.pixels[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return out;
}

GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0)) fail(Errc::InvalidArgument, "sigma must be non-negative");
  GrayImage out = img;
  if (spec.sigma == 0.0) return out;
  const double scale = spec.sigma / 255.0;
  Rng rng(spec.seed);
  for (double& p : out.pixels) p += scale * rng.normal();
  return out;
}

GrayImage clamp_unit(const GrayImage& img) {
  GrayImage out = img;
  for (double& p : out.pixels) p = std::clamp(p, 0.0, 1.0);
  return out;
}

std::vector<std::uint8_t> encode_raw(const GrayImage& img) {
  std::vector<std::uint8_t> out = {'C', 'D', 'R', '1'};
  out.reserve(12 + 8 * img.size());
  put_le(out, static_cast<std::uint32_t>(img.width));
  put_le(out, static_cast<std::uint32_t>(img.height));
  for (double p : img.pixels) put_le(out, p);
  return out;
}

GrayImage decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "CDR1", 4) != 0)
    fail(Errc::BadMagic, "expected CDR1 raster");
  if (bytes.size() < 12) fail(Errc::TruncatedData, "CDR1 header truncated");
  const auto width = get_le<std::uint32_t>(bytes, 4);
  const auto height = get_le<std::uint32_t>(bytes, 8);
  const std::size_t count = std::size_t{width} * height;
  if (width == 0 || height == 0) fail(Errc::UnsupportedFormat, "zero image dimension");
  if (bytes.size() != 12 + 8 * count) fail(Errc::TruncatedData, "CDR1 payload size mismatch");
  std::vector<double> px(count);
  std::memcpy(px.data(), bytes.data() + 12, 8 * count);
  return GrayImage(width, height, std::move(px));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::IoError, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

GrayImage read_gray(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "CDR1", 4) == 0) return decode_raw(bytes);
  auto decoded = decode_image(bytes);
  if (auto* rgb = std::get_if<RgbImage>(&decoded)) return rgb_to_intensity(*rgb);
  return std::get<GrayImage>(std::move(decoded));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, encode_image(img));
}

void write_raw(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, encode_raw(img));
}

}  // namespace cdenoise
