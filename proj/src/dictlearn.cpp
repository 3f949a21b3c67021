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

#include "cdenoise/dictlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "cdenoise/error.hpp"
#include "cdenoise/image.hpp"
#include "cdenoise/rng.hpp"
#include "cdenoise/sparse.hpp"

namespace cdenoise {

void DictionarySet::check_shapes() const {
  const auto n = psi_c.rows();
  const auto k = psi_c.cols();
  for (const auto* m : {&psi, &phi_c, &phi})
    if (m->rows() != n || m->cols() != k)
      fail(Errc::ShapeMismatch, "coupled dictionaries must share one n x k shape");
  if (n == 0 || k == 0) fail(Errc::ShapeMismatch, "empty dictionary");
}

void TrainConfig::validate() const {
  if (!(lambda > 0.0)) fail(Errc::InvalidArgument, "lambda must be positive");
  if (atoms < 1 || inner_sweeps < 1) fail(Errc::InvalidArgument, "counts must be at least 1");
  if (!(atom_reseed_threshold >= 0.0))
    fail(Errc::InvalidArgument, "reseed threshold must be non-negative");
}

CodeState CodeState::zeros(std::size_t atoms, std::size_t samples) {
  const auto k = static_cast<Eigen::Index>(atoms);
  const auto t = static_cast<Eigen::Index>(samples);
  return {Eigen::MatrixXd::Zero(k, t), Eigen::MatrixXd::Zero(k, t), Eigen::MatrixXd::Zero(k, t)};
}

std::string_view train_step_name(TrainStep step) noexcept {
  switch (step) {
    case TrainStep::CommonCodes: return "common-codes";
    case TrainStep::CommonAtoms: return "common-atoms";
    case TrainStep::TargetCodes: return "target-codes";
    case TrainStep::TargetAtoms: return "target-atoms";
    case TrainStep::GuideCodes: return "guide-codes";
    case TrainStep::GuideAtoms: return "guide-atoms";
  }
  return "unknown";
}

double coupled_objective(const DictionarySet& ds, const CodeState& cs, const TrainingSet& ts,
                         double lambda) {
  const double fit_x = (ts.X - ds.psi_c * cs.Z - ds.psi * cs.U).squaredNorm();
  const double fit_y = (ts.Y - ds.phi_c * cs.Z - ds.phi * cs.V).squaredNorm();
  const double l1 = cs.Z.lpNorm<1>() + cs.U.lpNorm<1>() + cs.V.lpNorm<1>();
  return 0.5 * (fit_x + fit_y) + lambda * l1;
}

namespace {

constexpr double kFlatColumn = 1e-12;

void check_training_shapes(const DictionarySet& ds, const CodeState& cs, const TrainingSet& ts) {
  ds.check_shapes();
  const auto n = static_cast<Eigen::Index>(ds.patch_dim());
  const auto k = static_cast<Eigen::Index>(ds.atoms());
  const auto t = ts.X.cols();
  if (ts.X.rows() != n || ts.Y.rows() != n || ts.Y.cols() != t)
    fail(Errc::DimensionMismatch, "training set does not match dictionary patch size");
  for (const auto* m : {&cs.Z, &cs.U, &cs.V})
    if (m->rows() != k || m->cols() != t)
      fail(Errc::DimensionMismatch, "code state does not match dictionaries and samples");
}

// Fills `dict` (rows x k) with normalized columns of `source` taken in a
// seeded random order, skipping flat columns. Random unit vectors stand in
// if the corpus has fewer than k usable columns.
void draw_atoms(Eigen::MatrixXd& dict, const Eigen::MatrixXd& source, std::size_t atoms,
                Rng& rng) {
  const auto t = static_cast<std::size_t>(source.cols());
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());

  dict.resize(source.rows(), static_cast<Eigen::Index>(atoms));
  std::size_t filled = 0;
  for (std::size_t i = 0; i < t && filled < atoms; ++i) {
    const auto col = source.col(static_cast<Eigen::Index>(order[i]));
    const double norm = col.norm();
    if (norm <= kFlatColumn) continue;
    dict.col(static_cast<Eigen::Index>(filled++)) = col / norm;
  }
  for (; filled < atoms; ++filled) {
    Eigen::VectorXd v(source.rows());
    for (auto& e : v) e = rng.normal();
    dict.col(static_cast<Eigen::Index>(filled)) = v / v.norm();
  }
}

// Block coordinate atom pass shared by all three dictionaries. `residual`
// equals target - dict * codes on entry and is kept in sync. Atom j moves to
// the row-wise least-squares point d_j + R z^j^T / (z^j z^j^T) and is then
// projected onto the unit ball. Atoms whose code row carries no energy are
// replaced by the normalized training column with the largest residual.
void update_atoms(Eigen::MatrixXd& dict, Eigen::MatrixXd& codes, Eigen::MatrixXd& residual,
                  const Eigen::MatrixXd& reseed_source, double reseed_threshold) {
  const Eigen::Index t = codes.cols();
  std::vector<Eigen::Index> support;
  std::vector<double> residual_norms;
  std::vector<char> reseeded;

  for (Eigen::Index j = 0; j < dict.cols(); ++j) {
    support.clear();
    double energy = 0.0;
    for (Eigen::Index s = 0; s < t; ++s) {
      const double z = codes(j, s);
      if (z != 0.0) {
        support.push_back(s);
        energy += z * z;
      }
    }

    if (energy < reseed_threshold) {
      for (auto s : support) {
        residual.col(s) += codes(j, s) * dict.col(j);
        codes(j, s) = 0.0;
      }
      if (residual_norms.empty()) {
        residual_norms.resize(static_cast<std::size_t>(t));
        reseeded.assign(static_cast<std::size_t>(t), 0);
        for (Eigen::Index s = 0; s < t; ++s) {
          residual_norms[static_cast<std::size_t>(s)] = residual.col(s).squaredNorm();
          // flat columns cannot become atoms
          if (reseed_source.col(s).norm() <= kFlatColumn) reseeded[static_cast<std::size_t>(s)] = 1;
        }
      }
      Eigen::Index worst = -1;
      for (Eigen::Index s = 0; s < t; ++s) {
        const auto i = static_cast<std::size_t>(s);
        if (reseeded[i]) continue;
        if (worst < 0 || residual_norms[i] > residual_norms[static_cast<std::size_t>(worst)])
          worst = s;
      }
      if (worst >= 0) {
        reseeded[static_cast<std::size_t>(worst)] = 1;
        dict.col(j) = reseed_source.col(worst).normalized();
      }
      continue;
    }

    Eigen::VectorXd atom = dict.col(j);
    for (auto s : support) atom += residual.col(s) * (codes(j, s) / energy);
    atom /= std::max(atom.norm(), 1.0);
    const Eigen::VectorXd delta = atom - dict.col(j);
    for (auto s : support) residual.col(s) -= codes(j, s) * delta;
    dict.col(j) = atom;
  }
}

void notify(const TrainHooks& hooks, std::size_t round, std::size_t sweep, TrainStep step,
            const DictionarySet& ds, const CodeState& cs) {
  if (hooks.on_step) hooks.on_step(TrainEvent{round, sweep, step, &ds, &cs});
}

}  // namespace

DictionarySet init_dictionaries(const TrainingSet& ts, std::size_t atoms, std::uint64_t seed) {
  if (ts.X.rows() == 0 || ts.X.rows() != ts.Y.rows() || ts.X.cols() != ts.Y.cols())
    fail(Errc::DimensionMismatch, "malformed training set");
  if (atoms < 1) fail(Errc::InvalidArgument, "need at least one atom");
  if (ts.samples() < atoms)
    fail(Errc::CorpusTooSmall, std::to_string(ts.samples()) + " samples for " +
                                   std::to_string(atoms) + " atoms");
  const auto n = ts.X.rows();
  Rng rng(seed);

  Eigen::MatrixXd stacked(2 * n, ts.X.cols());
  stacked.topRows(n) = ts.X;
  stacked.bottomRows(n) = ts.Y;
  Eigen::MatrixXd common;
  draw_atoms(common, stacked, atoms, rng);

  DictionarySet ds;
  ds.psi_c = common.topRows(n);
  ds.phi_c = common.bottomRows(n);
  draw_atoms(ds.psi, ts.X, atoms, rng);
  draw_atoms(ds.phi, ts.Y, atoms, rng);
  return ds;
}

void train_common(DictionarySet& ds, CodeState& cs, const TrainingSet& ts, const TrainConfig& cfg,
                  const TrainHooks& hooks, std::size_t round) {
  cfg.validate();
  check_training_shapes(ds, cs, ts);
  const auto n = static_cast<Eigen::Index>(ds.patch_dim());

  Eigen::MatrixXd dict(2 * n, ds.psi_c.cols());
  dict.topRows(n) = ds.psi_c;
  dict.bottomRows(n) = ds.phi_c;
  Eigen::MatrixXd source(2 * n, ts.X.cols());
  source.topRows(n) = ts.X;
  source.bottomRows(n) = ts.Y;
  Eigen::MatrixXd residual(2 * n, ts.X.cols());
  residual.topRows(n) = ts.X - ds.psi * cs.U;
  residual.bottomRows(n) = ts.Y - ds.phi * cs.V;
  residual.noalias() -= dict * cs.Z;

  const auto publish = [&] {
    ds.psi_c = dict.topRows(n);
    ds.phi_c = dict.bottomRows(n);
  };
  for (std::size_t sweep = 0; sweep < cfg.inner_sweeps; ++sweep) {
    ista_row_sweep_residual(cs.Z, dict, residual, cfg.lambda);
    if (hooks.on_step) publish();
    notify(hooks, round, sweep, TrainStep::CommonCodes, ds, cs);
    update_atoms(dict, cs.Z, residual, source, cfg.atom_reseed_threshold);
    if (hooks.on_step) publish();
    notify(hooks, round, sweep, TrainStep::CommonAtoms, ds, cs);
  }
  publish();
}

void train_unique(DictionarySet& ds, CodeState& cs, const TrainingSet& ts, const TrainConfig& cfg,
                  const TrainHooks& hooks, std::size_t round) {
  cfg.validate();
  check_training_shapes(ds, cs, ts);

  const auto stage = [&](Eigen::MatrixXd& dict, Eigen::MatrixXd& codes,
                         const Eigen::MatrixXd& common, const Eigen::MatrixXd& signal,
                         TrainStep code_step, TrainStep atom_step) {
    Eigen::MatrixXd residual = signal - common * cs.Z;
    residual.noalias() -= dict * codes;
    for (std::size_t sweep = 0; sweep < cfg.inner_sweeps; ++sweep) {
      ista_row_sweep_residual(codes, dict, residual, cfg.lambda);
      notify(hooks, round, sweep, code_step, ds, cs);
      update_atoms(dict, codes, residual, signal, cfg.atom_reseed_threshold);
      notify(hooks, round, sweep, atom_step, ds, cs);
    }
  };
  stage(ds.psi, cs.U, ds.psi_c, ts.X, TrainStep::TargetCodes, TrainStep::TargetAtoms);
  stage(ds.phi, cs.V, ds.phi_c, ts.Y, TrainStep::GuideCodes, TrainStep::GuideAtoms);
}

DictionarySet train(const TrainingSet& ts, const TrainConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  DictionarySet ds = init_dictionaries(ts, cfg.atoms, cfg.seed);
  CodeState cs = CodeState::zeros(cfg.atoms, ts.samples());
  if (hooks.on_stage) hooks.on_stage(0, "init", coupled_objective(ds, cs, ts, cfg.lambda));
  for (std::size_t round = 0; round < cfg.outer_rounds; ++round) {
    train_common(ds, cs, ts, cfg, hooks, round);
    if (hooks.on_stage) hooks.on_stage(round, "common", coupled_objective(ds, cs, ts, cfg.lambda));
    train_unique(ds, cs, ts, cfg, hooks, round);
    if (hooks.on_stage) hooks.on_stage(round, "unique", coupled_objective(ds, cs, ts, cfg.lambda));
  }
  return ds;
}

namespace {

constexpr char kDictMagic[4] = {'C', 'D', 'L', '1'};

}  // namespace

std::vector<std::uint8_t> serialize_dictionaries(const DictionarySet& ds) {
  ds.check_shapes();
  const auto n = static_cast<std::uint32_t>(ds.patch_dim());
  const auto k = static_cast<std::uint32_t>(ds.atoms());
  const std::size_t block = std::size_t{n} * k * sizeof(double);
  std::vector<std::uint8_t> out(12 + 4 * block);
  std::memcpy(out.data(), kDictMagic, 4);
  std::memcpy(out.data() + 4, &n, 4);
  std::memcpy(out.data() + 8, &k, 4);
  std::size_t offset = 12;
  for (const auto* m : {&ds.psi_c, &ds.psi, &ds.phi_c, &ds.phi}) {
    std::memcpy(out.data() + offset, m->data(), block);
    offset += block;
  }
  return out;
}

DictionarySet parse_dictionaries(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kDictMagic, 4) != 0)
    fail(Errc::BadMagic, "not a CDL1 dictionary file");
  if (bytes.size() < 12) fail(Errc::ShapeMismatch, "dictionary header truncated");
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::memcpy(&n, bytes.data() + 4, 4);
  std::memcpy(&k, bytes.data() + 8, 4);
  const std::size_t block = std::size_t{n} * k * sizeof(double);
  if (n == 0 || k == 0 || bytes.size() != 12 + 4 * block)
    fail(Errc::ShapeMismatch, "payload length does not match n=" + std::to_string(n) +
                                  " k=" + std::to_string(k));
  DictionarySet ds;
  std::size_t offset = 12;
  for (auto* m : {&ds.psi_c, &ds.psi, &ds.phi_c, &ds.phi}) {
    m->resize(n, k);
    std::memcpy(m->data(), bytes.data() + offset, block);
    offset += block;
  }
  return ds;
}

void save_dictionaries(const DictionarySet& ds, const std::filesystem::path& path) {
  write_file(path, serialize_dictionaries(ds));
}

DictionarySet load_dictionaries(const std::filesystem::path& path) {
  return parse_dictionaries(read_file(path));
}

}  // namespace cdenoise
