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

#include "cdenoise/patches.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cdenoise/error.hpp"
#include "cdenoise/rng.hpp"

namespace cdenoise {

namespace {

std::vector<std::size_t> axis_anchors(std::size_t length, std::size_t side, std::size_t stride) {
  std::vector<std::size_t> out;
  const std::size_t last = length - side;
  for (std::size_t p = 0; p <= last; p += stride) out.push_back(p);
  if (out.back() != last) out.push_back(last);
  return out;
}

void copy_patch(const GrayImage& img, const Anchor& a, std::size_t side,
                Eigen::Ref<Eigen::VectorXd> dst) {
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      dst(static_cast<Eigen::Index>(r * side + c)) = img.at(a.row + r, a.col + c);
}

}  // namespace

PatchGrid make_grid(std::size_t width, std::size_t height, std::size_t side, std::size_t stride) {
  if (side == 0) fail(Errc::InvalidArgument, "patch side must be positive");
  if (stride == 0) fail(Errc::InvalidArgument, "stride must be positive");
  if (side > width || side > height)
    fail(Errc::PatchTooLarge, "patch side " + std::to_string(side) + " exceeds image " +
                                  std::to_string(width) + "x" + std::to_string(height));
  PatchGrid grid{width, height, side, stride, {}};
  const auto rows = axis_anchors(height, side, stride);
  const auto cols = axis_anchors(width, side, stride);
  grid.positions.reserve(rows.size() * cols.size());
  for (auto r : rows)
    for (auto c : cols) grid.positions.push_back({r, c});
  return grid;
}

PatchMatrix extract_patches(const GrayImage& img, const PatchGrid& grid) {
  if (img.width != grid.image_width || img.height != grid.image_height)
    fail(Errc::GridMismatch, "grid was built for a different image size");
  const auto n = static_cast<Eigen::Index>(grid.patch_dim());
  const auto count = static_cast<Eigen::Index>(grid.count());
  PatchMatrix pm{Eigen::MatrixXd(n, count), Eigen::VectorXd::Zero(count), false};
  for (Eigen::Index i = 0; i < count; ++i)
    copy_patch(img, grid.positions[static_cast<std::size_t>(i)], grid.side, pm.data.col(i));
  return pm;
}

std::pair<PatchGrid, PatchMatrix> extract_grid(const GrayImage& img, std::size_t side,
                                               std::size_t stride) {
  auto grid = make_grid(img.width, img.height, side, stride);
  auto pm = extract_patches(img, grid);
  return {std::move(grid), std::move(pm)};
}

PatchMatrix remove_dc(PatchMatrix pm) {
  if (pm.centered) fail(Errc::AlreadyCentered, "patch DC already removed");
  pm.dc = pm.data.colwise().mean().transpose();
  pm.data.rowwise() -= pm.dc.transpose();
  pm.centered = true;
  return pm;
}

PatchMatrix restore_dc(PatchMatrix pm) {
  if (!pm.centered) return pm;
  pm.data.rowwise() += pm.dc.transpose();
  pm.dc.setZero();
  pm.centered = false;
  return pm;
}

GrayImage overlap_add(const PatchGrid& grid, const Eigen::MatrixXd& columns) {
  if (columns.rows() != static_cast<Eigen::Index>(grid.patch_dim()) ||
      columns.cols() != static_cast<Eigen::Index>(grid.count()))
    fail(Errc::GridMismatch, "patch matrix does not match grid");
  GrayImage out(grid.image_width, grid.image_height);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const auto& a = grid.positions[i];
    const auto col = columns.col(static_cast<Eigen::Index>(i));
    for (std::size_t r = 0; r < grid.side; ++r)
      for (std::size_t c = 0; c < grid.side; ++c)
        out.at(a.row + r, a.col + c) += col(static_cast<Eigen::Index>(r * grid.side + c));
  }
  return out;
}

GrayImage coverage(const PatchGrid& grid) {
  GrayImage out(grid.image_width, grid.image_height);
  for (const auto& a : grid.positions)
    for (std::size_t r = 0; r < grid.side; ++r)
      for (std::size_t c = 0; c < grid.side; ++c) out.at(a.row + r, a.col + c) += 1.0;
  return out;
}

TrainingSet build_training_set(std::span<const GrayImage> targets,
                               std::span<const GrayImage> guides, std::size_t side,
                               std::size_t samples, std::uint64_t seed) {
  if (targets.size() != guides.size())
    fail(Errc::DimensionMismatch, "target and guide lists differ in length");
  if (targets.empty() || samples == 0) fail(Errc::EmptyCorpus, "no training images or samples");

  std::vector<PatchGrid> grids;
  grids.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].width != guides[i].width || targets[i].height != guides[i].height)
      fail(Errc::DimensionMismatch, "training pair " + std::to_string(i) + " is not registered");
    grids.push_back(make_grid(targets[i].width, targets[i].height, side, 1));
  }

  // Each image keeps a shuffled queue of anchors that is drawn without
  // replacement and reshuffled once exhausted.
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> order(grids.size());
  std::vector<std::size_t> cursor(grids.size(), 0);

  const auto n = static_cast<Eigen::Index>(side * side);
  TrainingSet ts{Eigen::MatrixXd(n, static_cast<Eigen::Index>(samples)),
                 Eigen::MatrixXd(n, static_cast<Eigen::Index>(samples))};
  for (std::size_t s = 0; s < samples; ++s) {
    const auto img = static_cast<std::size_t>(rng.index(grids.size()));
    auto& queue = order[img];
    if (cursor[img] == queue.size()) {
      queue.resize(grids[img].count());
      std::iota(queue.begin(), queue.end(), std::size_t{0});
      rng.shuffle(queue.begin(), queue.end());
      cursor[img] = 0;
    }
    const Anchor& a = grids[img].positions[queue[cursor[img]++]];
    const auto col = static_cast<Eigen::Index>(s);
    copy_patch(targets[img], a, side, ts.X.col(col));
    copy_patch(guides[img], a, side, ts.Y.col(col));
  }
  ts.X.rowwise() -= ts.X.colwise().mean();
  ts.Y.rowwise() -= ts.Y.colwise().mean();
  return ts;
}

}  // namespace cdenoise
