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
#include <vector>

#include <Eigen/Dense>

#include "cdenoise/cluster.hpp"
#include "cdenoise/dictionary.hpp"
#include "cdenoise/image.hpp"
#include "cdenoise/patches.hpp"
#include "cdenoise/sparse.hpp"

namespace cdenoise {

struct DenoiseConfig {
  double sigma = 0.0;  // 8-bit units
  double gain = 1.15;
  std::size_t max_support = 16;
  double mu = 0.0;
  std::size_t stride = 1;
  bool group = false;
  std::size_t clusters = 0;  // 0 selects default_cluster_count(P)
  std::size_t sample_cap = 2000;
  std::uint64_t seed = 0;

  void validate() const;
  CodingConfig coding(std::size_t patch_dim) const;
};

// Per-patch target estimates psi_c z + psi u with the target DC restored.
struct PatchEstimates {
  PatchGrid grid;
  Eigen::MatrixXd est;
};

// Coupled codes of every patch pair of one image pair.
struct CodedPatches {
  PatchGrid grid;
  PatchMatrix target;  // DC removed
  std::vector<JointCode> codes;
  ClusterAssignment clusters;  // empty unless coded in groups
  std::vector<GroupCode> groups;
};

CodedPatches code_patches(const GrayImage& noisy, const GrayImage& guide,
                          const DictionarySet& ds, const DenoiseConfig& cfg);

PatchEstimates estimate_patches(const CodedPatches& coded, const DictionarySet& ds);

// (mu * noisy + sum_i R_i^T est_i) / (mu + coverage), the exact minimizer of
// mu ||X - noisy||^2 + sum_i ||R_i X - est_i||^2 since the system is diagonal.
GrayImage reconstruct(const PatchEstimates& pe, const GrayImage& noisy, double mu);

GrayImage denoise_basic(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                        const DenoiseConfig& cfg);
GrayImage denoise_group(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                        const DenoiseConfig& cfg);
// Dispatches on cfg.group.
GrayImage denoise(const GrayImage& noisy, const GrayImage& guide, const DictionarySet& ds,
                  const DenoiseConfig& cfg);

// |truth - estimate| rescaled so the largest difference maps to 1.0.
GrayImage error_map(const GrayImage& truth, const GrayImage& estimate);

}  // namespace cdenoise
