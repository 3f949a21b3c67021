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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cdenoise/dictionary.hpp"
#include "cdenoise/patches.hpp"

namespace cdenoise {

struct TrainConfig {
  double lambda = 0.05;
  std::size_t atoms = 1024;  // k, per dictionary
  std::size_t inner_sweeps = 20;
  std::size_t outer_rounds = 5;
  std::uint64_t seed = 0;
  double atom_reseed_threshold = 1e-12;

  void validate() const;
};

// Codes for the whole training set, each k x T.
struct CodeState {
  Eigen::MatrixXd Z;
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;

  static CodeState zeros(std::size_t atoms, std::size_t samples);
};

enum class TrainStep {
  CommonCodes,
  CommonAtoms,
  TargetCodes,
  TargetAtoms,
  GuideCodes,
  GuideAtoms,
};

std::string_view train_step_name(TrainStep step) noexcept;

struct TrainEvent {
  std::size_t round = 0;
  std::size_t sweep = 0;
  TrainStep step = TrainStep::CommonCodes;
  const DictionarySet* dictionaries = nullptr;
  const CodeState* codes = nullptr;
};

struct TrainHooks {
  // After every code or atom pass.
  std::function<void(const TrainEvent&)> on_step;
  // After each common / unique stage, with the training objective.
  std::function<void(std::size_t round, std::string_view stage, double objective)> on_stage;
};

// Sum_i 1/2 ||[x_i; y_i] - D [z_i; u_i; v_i]||^2 + lambda ||[z_i; u_i; v_i]||_1
double coupled_objective(const DictionarySet& ds, const CodeState& cs, const TrainingSet& ts,
                         double lambda);

// Atoms are drawn from distinct non-flat training columns and normalized:
// common atoms from stacked pairs, unique atoms independently per modality.
DictionarySet init_dictionaries(const TrainingSet& ts, std::size_t atoms, std::uint64_t seed);

void train_common(DictionarySet& ds, CodeState& cs, const TrainingSet& ts, const TrainConfig& cfg,
                  const TrainHooks& hooks = {}, std::size_t round = 0);

void train_unique(DictionarySet& ds, CodeState& cs, const TrainingSet& ts, const TrainConfig& cfg,
                  const TrainHooks& hooks = {}, std::size_t round = 0);

DictionarySet train(const TrainingSet& ts, const TrainConfig& cfg, const TrainHooks& hooks = {});

// "CDL1", u32 n, u32 k, then psi_c, psi, phi_c, phi as column-major f64 (LE).
std::vector<std::uint8_t> serialize_dictionaries(const DictionarySet& ds);
DictionarySet parse_dictionaries(std::span<const std::uint8_t> bytes);
void save_dictionaries(const DictionarySet& ds, const std::filesystem::path& path);
DictionarySet load_dictionaries(const std::filesystem::path& path);

}  // namespace cdenoise
