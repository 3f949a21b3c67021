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

#include "cdenoise/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "cdenoise/error.hpp"

namespace cdenoise {

namespace {

constexpr double kMaxGramCondition = 1e12;
constexpr double kZeroAtomNorm = 1e-12;

struct Pursuit {
  std::vector<Eigen::Index> support;  // selection order
  Eigen::MatrixXd coefs;              // |support| x m, w.r.t. normalized atoms
  double residual_sq = 0.0;
  StopReason stop = StopReason::ResidualMet;
  std::vector<double> trace;
};

// Shared OMP / SOMP engine. Each step picks the admissible atom with the
// largest sum of squared normalized correlations over the residual columns
// (for one column this is the usual max |correlation|; ties go to the lowest
// index), rejects it if the active Gram matrix would exceed the condition
// limit, then re-fits every column by least squares on the active set.
Pursuit pursue(const StackedDictionary& dict, const Eigen::MatrixXd& signals, double budget,
               std::size_t max_support) {
  const Eigen::MatrixXd& atoms = dict.normalized();
  const Eigen::Index count = atoms.cols();
  std::vector<char> blocked(static_cast<std::size_t>(count));
  for (Eigen::Index j = 0; j < count; ++j) blocked[static_cast<std::size_t>(j)] = !dict.admissible(j);

  Pursuit out;
  Eigen::MatrixXd residual = signals;
  Eigen::MatrixXd active(atoms.rows(), 0);
  Eigen::MatrixXd gram(0, 0);
  out.coefs.resize(0, signals.cols());
  out.residual_sq = residual.squaredNorm();
  out.trace.push_back(out.residual_sq);

  while (true) {
    if (out.residual_sq <= budget) {
      out.stop = StopReason::ResidualMet;
      break;
    }
    if (out.support.size() >= max_support) {
      out.stop = StopReason::SupportCap;
      break;
    }
    const Eigen::VectorXd score = (atoms.transpose() * residual).rowwise().squaredNorm();

    Eigen::Index pick = -1;
    const auto s = static_cast<Eigen::Index>(out.support.size());
    while (true) {
      pick = -1;
      double best = -1.0;
      for (Eigen::Index j = 0; j < count; ++j) {
        if (!blocked[static_cast<std::size_t>(j)] && score(j) > best) {
          best = score(j);
          pick = j;
        }
      }
      if (pick < 0) break;

      Eigen::MatrixXd candidate(s + 1, s + 1);
      candidate.topLeftCorner(s, s) = gram;
      const Eigen::VectorXd cross = active.transpose() * atoms.col(pick);
      candidate.col(s).head(s) = cross;
      candidate.row(s).head(s) = cross.transpose();
      candidate(s, s) = atoms.col(pick).squaredNorm();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(candidate, Eigen::EigenvaluesOnly);
      const double lo = eig.eigenvalues()(0);
      const double hi = eig.eigenvalues()(s);
      if (lo > 0.0 && hi <= kMaxGramCondition * lo) {
        gram = std::move(candidate);
        break;
      }
      blocked[static_cast<std::size_t>(pick)] = 1;
    }
    if (pick < 0) {
      out.stop = StopReason::Exhausted;
      break;
    }

    blocked[static_cast<std::size_t>(pick)] = 1;
    out.support.push_back(pick);
    active.conservativeResize(Eigen::NoChange, s + 1);
    active.col(s) = atoms.col(pick);
    out.coefs = active.householderQr().solve(signals);
    residual = signals - active * out.coefs;
    out.residual_sq = residual.squaredNorm();
    out.trace.push_back(out.residual_sq);
  }
  return out;
}

JointCode split_code(const Pursuit& p, const StackedDictionary& dict, Eigen::Index column) {
  const auto k = static_cast<Eigen::Index>(dict.atoms());
  JointCode code;
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    const Eigen::Index idx = p.support[i];
    const double value = p.coefs(static_cast<Eigen::Index>(i), column) / dict.norms()(idx);
    if (value == 0.0) continue;
    const auto block = idx / k;
    const auto local = static_cast<std::uint32_t>(idx % k);
    (block == 0 ? code.z : block == 1 ? code.u : code.v).push_back({local, value});
  }
  const auto by_index = [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; };
  std::sort(code.z.begin(), code.z.end(), by_index);
  std::sort(code.u.begin(), code.u.end(), by_index);
  std::sort(code.v.begin(), code.v.end(), by_index);
  return code;
}

Eigen::MatrixXd stack_signals(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                              std::size_t n) {
  const auto rows = static_cast<Eigen::Index>(n);
  if (xs.rows() != rows || ys.rows() != rows || xs.cols() != ys.cols())
    fail(Errc::DimensionMismatch, "patch dimension does not match the dictionaries");
  Eigen::MatrixXd stacked(2 * rows, xs.cols());
  stacked.topRows(rows) = xs;
  stacked.bottomRows(rows) = ys;
  return stacked;
}

void check_config(const CodingConfig& cfg) {
  if (!(cfg.gain > 0.0)) fail(Errc::InvalidArgument, "gain C must be positive");
  if (cfg.max_support < 1) fail(Errc::InvalidArgument, "max support must be at least 1");
  if (!(cfg.sigma_norm >= 0.0)) fail(Errc::InvalidArgument, "sigma must be non-negative");
}

}  // namespace

double soft_threshold(double a, double lambda) {
  const double mag = std::abs(a) - lambda;
  if (mag <= 0.0) return 0.0;
  return a < 0.0 ? -mag : mag;
}

void ista_row_sweep_residual(Eigen::MatrixXd& Z, const Eigen::MatrixXd& D,
                             Eigen::MatrixXd& residual, double lambda) {
  if (D.cols() != Z.rows() || D.rows() != residual.rows() || Z.cols() != residual.cols())
    fail(Errc::DimensionMismatch, "code, dictionary and signal shapes disagree");
  for (Eigen::Index j = 0; j < Z.rows(); ++j) {
    const auto atom = D.col(j);
    const double energy = atom.squaredNorm();
    if (std::sqrt(energy) < kZeroAtomNorm)
      fail(Errc::ZeroAtom, "atom " + std::to_string(j) + " has zero norm");
    const Eigen::VectorXd gradient = residual.transpose() * atom;
    const double threshold = lambda / energy;
    for (Eigen::Index t = 0; t < Z.cols(); ++t) {
      const double old = Z(j, t);
      const double updated = soft_threshold(old + gradient(t) / energy, threshold);
      if (updated != old) {
        residual.col(t) -= (updated - old) * atom;
        Z(j, t) = updated;
      }
    }
  }
}

void ista_row_sweep(Eigen::MatrixXd& Z, const Eigen::MatrixXd& D, const Eigen::MatrixXd& Xt,
                    double lambda) {
  if (D.rows() != Xt.rows() || D.cols() != Z.rows() || Z.cols() != Xt.cols())
    fail(Errc::DimensionMismatch, "code, dictionary and signal shapes disagree");
  Eigen::MatrixXd residual = Xt - D * Z;
  ista_row_sweep_residual(Z, D, residual, lambda);
}

StackedDictionary::StackedDictionary(const DictionarySet& ds)
    : ds_(ds), n_(ds.patch_dim()), k_(ds.atoms()) {
  ds_.check_shapes();
  const auto n = static_cast<Eigen::Index>(n_);
  const auto k = static_cast<Eigen::Index>(k_);
  normalized_ = Eigen::MatrixXd::Zero(2 * n, 3 * k);
  normalized_.block(0, 0, n, k) = ds_.psi_c;
  normalized_.block(n, 0, n, k) = ds_.phi_c;
  normalized_.block(0, k, n, k) = ds_.psi;
  normalized_.block(n, 2 * k, n, k) = ds_.phi;
  norms_ = normalized_.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < 3 * k; ++j) {
    if (norms_(j) > kZeroAtomNorm)
      normalized_.col(j) /= norms_(j);
    else
      normalized_.col(j).setZero();
  }
}

CodingResult joint_omp(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const StackedDictionary& dict, const CodingConfig& cfg) {
  check_config(cfg);
  const Eigen::MatrixXd stacked = stack_signals(x, y, dict.patch_dim());
  auto p = pursue(dict, stacked, cfg.residual_budget(), cfg.max_support);
  CodingResult out;
  out.code = split_code(p, dict, 0);
  out.residual_sq = p.residual_sq;
  out.stop = p.stop;
  out.residual_trace = std::move(p.trace);
  return out;
}

CodingResult joint_omp(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const DictionarySet& ds, const CodingConfig& cfg) {
  return joint_omp(x, y, StackedDictionary(ds), cfg);
}

GroupCode group_somp(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                     const StackedDictionary& dict, const CodingConfig& cfg) {
  check_config(cfg);
  if (xs.cols() < 1) fail(Errc::InvalidArgument, "group must have at least one member");
  const Eigen::MatrixXd stacked = stack_signals(xs, ys, dict.patch_dim());
  const double budget = static_cast<double>(xs.cols()) * cfg.residual_budget();
  const auto p = pursue(dict, stacked, budget, cfg.max_support);
  GroupCode out;
  out.support.reserve(p.support.size());
  for (auto idx : p.support) out.support.push_back(static_cast<std::uint32_t>(idx));
  std::sort(out.support.begin(), out.support.end());
  out.codes.reserve(static_cast<std::size_t>(xs.cols()));
  for (Eigen::Index c = 0; c < xs.cols(); ++c) out.codes.push_back(split_code(p, dict, c));
  out.residual_sq = p.residual_sq;
  out.stop = p.stop;
  return out;
}

GroupCode group_somp(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                     const DictionarySet& ds, const CodingConfig& cfg) {
  return group_somp(xs, ys, StackedDictionary(ds), cfg);
}

namespace {

Eigen::VectorXd synthesize(const Eigen::MatrixXd& common, const Eigen::MatrixXd& unique,
                           const SparseVector& shared, const SparseVector& own) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(common.rows());
  for (const auto& e : shared) out += e.value * common.col(e.index);
  for (const auto& e : own) out += e.value * unique.col(e.index);
  return out;
}

}  // namespace

Eigen::VectorXd synthesize_target(const DictionarySet& ds, const JointCode& code) {
  return synthesize(ds.psi_c, ds.psi, code.z, code.u);
}

Eigen::VectorXd synthesize_guide(const DictionarySet& ds, const JointCode& code) {
  return synthesize(ds.phi_c, ds.phi, code.z, code.v);
}

}  // namespace cdenoise
