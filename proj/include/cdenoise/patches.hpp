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
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cdenoise/image.hpp"

namespace cdenoise {

struct Anchor {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Anchor&) const = default;
};

// Top-left anchors of side x side patches, rows then columns. The last valid
// row and column anchors are always present so every pixel is covered.
struct PatchGrid {
  std::size_t image_width = 0;
  std::size_t image_height = 0;
  std::size_t side = 0;
  std::size_t stride = 1;
  std::vector<Anchor> positions;

  std::size_t patch_dim() const noexcept { return side * side; }
  std::size_t count() const noexcept { return positions.size(); }
};

// Column i is the row-major vectorization of patch i. `dc` holds the removed
// per-patch means when `centered` is set, zeros otherwise.
struct PatchMatrix {
  Eigen::MatrixXd data;
  Eigen::VectorXd dc;
  bool centered = false;
};

// Registered, DC-removed patch pairs; column i of X and Y share an anchor.
struct TrainingSet {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;

  std::size_t samples() const noexcept { return static_cast<std::size_t>(X.cols()); }
  std::size_t patch_dim() const noexcept { return static_cast<std::size_t>(X.rows()); }
};

// Anchors every `stride` pixels plus the last row/column anchor. Every pixel
// is covered as long as stride <= side.
PatchGrid make_grid(std::size_t width, std::size_t height, std::size_t side, std::size_t stride);

PatchMatrix extract_patches(const GrayImage& img, const PatchGrid& grid);

std::pair<PatchGrid, PatchMatrix> extract_grid(const GrayImage& img, std::size_t side,
                                               std::size_t stride);

PatchMatrix remove_dc(PatchMatrix pm);
PatchMatrix restore_dc(PatchMatrix pm);

// Sum_i R_i^T columns(i), i.e. overlap-add of the patch columns.
GrayImage overlap_add(const PatchGrid& grid, const Eigen::MatrixXd& columns);

// Number of patches covering each pixel.
GrayImage coverage(const PatchGrid& grid);

TrainingSet build_training_set(std::span<const GrayImage> targets,
                               std::span<const GrayImage> guides, std::size_t side,
                               std::size_t samples, std::uint64_t seed);

}  // namespace cdenoise
