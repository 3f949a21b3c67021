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

#include "cdenoise/denoise.hpp"

#include <cmath>
#include <string>

#include "cdenoise/error.hpp"

namespace cdenoise {

void DenoiseConfig::validate() const {
  if (!(sigma > 0.0)) fail(Errc::InvalidArgument, "sigma must be positive for denoising");
  if (!(gain > 0.0)) fail(Errc::InvalidArgument, "gain C must be positive");
  if (max_support < 1) fail(Errc::InvalidArgument, "max support must be at least 1");
  if (!(mu >= 0.0)) fail(Errc::InvalidArgument, "mu must be non-negative");
  if (stride < 1) fail(Errc::InvalidArgument, "stride must be at least 1");
}

CodingConfig DenoiseConfig::coding(std::size_t patch_dim) const {
  return {sigma / 255.0, gain, max_support, patch_dim};
}

namespace {

std::size_t patch_side(const DictionarySet& ds) {
  ds.check_shapes();
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(double(ds.patch_dim()))));
  if (side * side != ds.patch_dim())
    fail(Errc::ShapeMismatch, "dictionary patch dimension is not a square");
  return side;
}

}  // namespace

CodedPatches code_patches(const GrayImage& noisy, const GrayImage& guide,
                          const DictionarySet& ds, const DenoiseConfig& cfg) {
  cfg.validate();
  if (noisy.width != guide.width || noisy.height != guide.height)
    fail(Errc::DimensionMismatch, "noisy and guidance images differ in size");
  const auto side = patch_side(ds);

  CodedPatches out;
  auto [grid, target] = extract_grid(noisy, side, cfg.stride);
  const PatchMatrix guide_patches = remove_dc(extract_patches(guide, grid));
  out.grid = std::move(grid);
  out.target = remove_dc(std::move(target));

  const StackedDictionary dict(ds);
  const CodingConfig coding = cfg.coding(ds.patch_dim());
  const auto count = static_cast<std::ptrdiff_t>(out.grid.count());
  out.codes.resize(out.grid.count());

  if (!cfg.group) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      out.codes[static_cast<std::size_t>(i)] =
          joint_omp(out.target.data.col(col), guide_patches.data.col(col), dict, coding).code;
    }
    return out;
  }

  const std::size_t clusters =
      cfg.clusters == 0 ? default_cluster_count(out.grid.count()) : cfg.clusters;
  out.clusters =
      cluster_patches(out.target.data, guide_patches.data, clusters, cfg.sample_cap, cfg.seed);
  const auto members = out.clusters.members();
  out.groups.resize(members.size());
  const auto groups = static_cast<std::ptrdiff_t>(members.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    const auto& idx = members[static_cast<std::size_t>(g)];
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd xs(out.target.data.rows(), m);
    Eigen::MatrixXd ys(guide_patches.data.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
      xs.col(j) = out.target.data.col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
      ys.col(j) = guide_patches.data.col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
    }
    auto& group = out.groups[static_cast<std::size_t>(g)];
    group = group_somp(xs, ys, dict, coding);
    for (std::size_t j = 0; j < idx.size(); ++j) out.codes[idx[j]] = group.codes[j];
  }
  return out;
}

PatchEstimates estimate_patches(const CodedPatches& coded, const DictionarySet& ds) {
  PatchEstimates pe{coded.grid, Eigen::MatrixXd(coded.target.data.rows(),
                                                static_cast<Eigen::Index>(coded.codes.size()))};
  for (std::size_t i = 0; i < coded.codes.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    pe.est.col(col) = synthesize_target(ds, coded.codes[i]).array() + coded.target.dc(col);
  }
  return pe;
}

GrayImage reconstruct(const PatchEstimates& pe, const GrayImage& noisy, double mu) {
  if (noisy.width != pe.grid.image_width || noisy.height != pe.grid.image_height)
    fail(Errc::GridMismatch, "patch grid does not match the noisy image");
  if (!(mu >= 0.0)) fail(Errc::InvalidArgument, "mu must be non-negative");
  GrayImage out = overlap_add(pe.grid, pe.est);
  const GrayImage cover = coverage(pe.grid);
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (mu == 0.0 && cover.pixels[p] == 0.0)
      fail(Errc::InvalidArgument, "pixel not covered by any patch and mu is zero");
    out.pixels[p] = (mu * noisy.pixels[p] + out.pixels[p]) / (mu + cover.pixels[p]);
  }
  return out;
}

GrayImage denoise_basic(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                        const DenoiseConfig& cfg) {
  DenoiseConfig basic = cfg;
  basic.group = false;
  const auto coded = code_patches(noisy, guide, ds, basic);
  return reconstruct(estimate_patches(coded, ds), noisy, cfg.mu);
}

GrayImage denoise_group(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                        const DenoiseConfig& cfg) {
  DenoiseConfig grouped = cfg;
  grouped.group = true;
  const auto coded = code_patches(noisy, guide, ds, grouped);
  return reconstruct(estimate_patches(coded, ds), noisy, cfg.mu);
}

GrayImage denoise(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                  const DenoiseConfig& cfg) {
  return cfg.group ? denoise_group(noisy, guide, ds, cfg) : denoise_basic(noisy, guide, ds, cfg);
}

GrayImage error_map(const GrayImage& truth, const GrayImage& estimate) {
  if (truth.width != estimate.width || truth.height != estimate.height)
    fail(Errc::DimensionMismatch, "images differ in size");
  GrayImage out(truth.width, truth.height);
  double peak = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.pixels[i] = std::abs(truth.pixels[i] - estimate.pixels[i]);
    peak = std::max(peak, out.pixels[i]);
  }
  if (peak > 0.0)
    for (double& p : out.pixels) p /= peak;
  return out;
}

}  // namespace cdenoise
