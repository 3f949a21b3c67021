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

#include "cdenoise/dictionary.hpp"

namespace cdenoise {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;
  bool operator==(const SparseEntry&) const = default;
};

// Ascending indices, nonzero values.
using SparseVector = std::vector<SparseEntry>;

struct JointCode {
  SparseVector z;  // common
  SparseVector u;  // target-specific
  SparseVector v;  // guidance-specific

  std::size_t nnz() const noexcept { return z.size() + u.size() + v.size(); }
  bool operator==(const JointCode&) const = default;
};

struct CodingConfig {
  double sigma_norm = 0.0;  // noise std on the normalized scale
  double gain = 1.15;       // C
  std::size_t max_support = 16;
  std::size_t patch_dim = 0;  // n

  // Residual budget C * n * sigma^2 for one stacked patch pair.
  double residual_budget() const noexcept {
    return gain * static_cast<double>(patch_dim) * sigma_norm * sigma_norm;
  }
};

enum class StopReason {
  ResidualMet,  // residual energy within budget
  SupportCap,   // max_support atoms selected
  Exhausted,    // no admissible atom left (degenerate dictionary)
};

struct CodingResult {
  JointCode code;
  double residual_sq = 0.0;
  StopReason stop = StopReason::ResidualMet;
  std::vector<double> residual_trace;  // residual energy before and after each selection
};

// Codes of one cluster sharing a common support in the stacked (z, u, v)
// index space [0, 3k).
struct GroupCode {
  std::vector<std::uint32_t> support;  // ascending
  std::vector<JointCode> codes;
  double residual_sq = 0.0;
  StopReason stop = StopReason::ResidualMet;
};

double soft_threshold(double a, double lambda);

// One Gauss-Seidel pass of proximal coordinate updates over the rows of Z for
//   1/2 ||Xt - D Z||_F^2 + lambda ||Z||_1.
// Row j moves to S_{lambda/|d_j|^2}(z^j + d_j^T (Xt - D Z) / |d_j|^2), which
// is the exact row minimizer and equals the plain S_lambda step for unit atoms.
void ista_row_sweep(Eigen::MatrixXd& Z, const Eigen::MatrixXd& D, const Eigen::MatrixXd& Xt,
                    double lambda);

// Same sweep with the residual Xt - D Z carried in `residual` and kept in sync.
void ista_row_sweep_residual(Eigen::MatrixXd& Z, const Eigen::MatrixXd& D,
                             Eigen::MatrixXd& residual, double lambda);

// The 2n x 3k block dictionary [psi_c psi 0; phi_c 0 phi] with its atoms
// normalized for selection. Immutable and safe to share across threads.
class StackedDictionary {
 public:
  explicit StackedDictionary(const DictionarySet& ds);

  std::size_t patch_dim() const noexcept { return n_; }
  std::size_t atoms() const noexcept { return k_; }
  const DictionarySet& dictionaries() const noexcept { return ds_; }

  // Unit-norm stacked atoms; columns of zero-norm atoms are left zero.
  const Eigen::MatrixXd& normalized() const noexcept { return normalized_; }
  const Eigen::VectorXd& norms() const noexcept { return norms_; }
  bool admissible(Eigen::Index j) const { return norms_(j) > 1e-12; }

 private:
  DictionarySet ds_;
  std::size_t n_;
  std::size_t k_;
  Eigen::MatrixXd normalized_;
  Eigen::VectorXd norms_;
};

// Greedy l0 pursuit of the stacked pair [x; y].
CodingResult joint_omp(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const StackedDictionary& dict, const CodingConfig& cfg);
CodingResult joint_omp(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const DictionarySet& ds, const CodingConfig& cfg);

// Simultaneous pursuit over the m columns of xs / ys with one shared support;
// the residual budget is m * C * n * sigma^2.
GroupCode group_somp(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                     const StackedDictionary& dict, const CodingConfig& cfg);
GroupCode group_somp(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                     const DictionarySet& ds, const CodingConfig& cfg);

// psi_c z + psi u
Eigen::VectorXd synthesize_target(const DictionarySet& ds, const JointCode& code);
// phi_c z + phi v
Eigen::VectorXd synthesize_guide(const DictionarySet& ds, const JointCode& code);

}  // namespace cdenoise
