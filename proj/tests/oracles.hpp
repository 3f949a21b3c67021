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

// Independent reference computations used by the test suites. Nothing here
// calls into the library's numerical paths; each oracle takes the slow,
// explicit route.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cdenoise/dictionary.hpp"
#include "cdenoise/dictlearn.hpp"
#include "cdenoise/image.hpp"
#include "cdenoise/patches.hpp"
#include "cdenoise/rng.hpp"

namespace oracle {

// Coupled training objective, summed column by column with explicit loops.
inline double objective(const cdenoise::DictionarySet& ds, const cdenoise::CodeState& cs,
                        const cdenoise::TrainingSet& ts, double lambda) {
  const auto n = ts.X.rows();
  const auto k = ds.psi_c.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < ts.X.cols(); ++i) {
    double fit = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      double px = 0.0;
      double py = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        px += ds.psi_c(r, j) * cs.Z(j, i) + ds.psi(r, j) * cs.U(j, i);
        py += ds.phi_c(r, j) * cs.Z(j, i) + ds.phi(r, j) * cs.V(j, i);
      }
      fit += (ts.X(r, i) - px) * (ts.X(r, i) - px) + (ts.Y(r, i) - py) * (ts.Y(r, i) - py);
    }
    double l1 = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
      l1 += std::abs(cs.Z(j, i)) + std::abs(cs.U(j, i)) + std::abs(cs.V(j, i));
    total += 0.5 * fit + lambda * l1;
  }
  return total;
}

// 1/2 ||Xt - D Z||_F^2 + lambda ||Z||_1, explicit loops.
inline double lasso_objective(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& D,
                              const Eigen::MatrixXd& Xt, double lambda) {
  double total = 0.0;
  for (Eigen::Index t = 0; t < Xt.cols(); ++t) {
    for (Eigen::Index r = 0; r < Xt.rows(); ++r) {
      double p = 0.0;
      for (Eigen::Index j = 0; j < D.cols(); ++j) p += D(r, j) * Z(j, t);
      total += 0.5 * (Xt(r, t) - p) * (Xt(r, t) - p);
    }
    for (Eigen::Index j = 0; j < Z.rows(); ++j) total += lambda * std::abs(Z(j, t));
  }
  return total;
}

// Explicit [psi_c psi 0; phi_c 0 phi].
inline Eigen::MatrixXd stacked_matrix(const cdenoise::DictionarySet& ds) {
  const auto n = ds.psi_c.rows();
  const auto k = ds.psi_c.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 3 * k);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index j = 0; j < k; ++j) {
      a(r, j) = ds.psi_c(r, j);
      a(n + r, j) = ds.phi_c(r, j);
      a(r, k + j) = ds.psi(r, j);
      a(n + r, 2 * k + j) = ds.phi(r, j);
    }
  return a;
}

// Least-squares residual energy of b on the listed columns of a (SVD solve).
inline double ls_residual(const Eigen::MatrixXd& a, const std::vector<int>& cols,
                          const Eigen::VectorXd& b) {
  if (cols.empty()) return b.squaredNorm();
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = a.col(cols[i]);
  const Eigen::VectorXd coef = sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return (b - sub * coef).squaredNorm();
}

struct GreedyResult {
  std::vector<int> support;  // selection order
  double residual_sq = 0.0;
};

// Textbook OMP: at each step scan every unused column for the largest
// |<a_j, r>| / |a_j|, then refit by SVD least squares.
inline GreedyResult naive_greedy(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 std::size_t max_support, double budget) {
  GreedyResult out;
  Eigen::VectorXd r = b;
  out.residual_sq = r.squaredNorm();
  while (out.residual_sq > budget && out.support.size() < max_support) {
    int best = -1;
    double best_score = -1.0;
    for (int j = 0; j < a.cols(); ++j) {
      bool used = false;
      for (int s : out.support) used = used || s == j;
      const double norm = a.col(j).norm();
      if (used || norm <= 1e-12) continue;
      const double score = std::abs(a.col(j).dot(r)) / norm;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;
    out.support.push_back(best);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(out.support.size()));
    for (std::size_t i = 0; i < out.support.size(); ++i)
      sub.col(static_cast<Eigen::Index>(i)) = a.col(out.support[i]);
    const Eigen::VectorXd coef = sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    r = b - sub * coef;
    out.residual_sq = r.squaredNorm();
  }
  return out;
}

// Best residual over every support of size <= max_support.
inline double exhaustive_l0(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            std::size_t max_support) {
  double best = b.squaredNorm();
  std::vector<int> cols;
  const int count = static_cast<int>(a.cols());
  auto recurse = [&](auto&& self, int start) -> void {
    if (!cols.empty()) best = std::min(best, ls_residual(a, cols, b));
    if (cols.size() == max_support) return;
    for (int j = start; j < count; ++j) {
      cols.push_back(j);
      self(self, j + 1);
      cols.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

// Solves (mu I + sum_i R_i^T R_i) X = mu noisy + sum_i R_i^T est_i densely,
// with every R_i built as an explicit n x N selection matrix.
inline cdenoise::GrayImage dense_reconstruct(const cdenoise::PatchGrid& grid,
                                             const Eigen::MatrixXd& est,
                                             const cdenoise::GrayImage& noisy, double mu) {
  const auto pixels = static_cast<Eigen::Index>(noisy.size());
  const auto n = static_cast<Eigen::Index>(grid.patch_dim());
  Eigen::MatrixXd lhs = mu * Eigen::MatrixXd::Identity(pixels, pixels);
  Eigen::VectorXd rhs(pixels);
  for (Eigen::Index p = 0; p < pixels; ++p) rhs(p) = mu * noisy.pixels[static_cast<std::size_t>(p)];
  for (std::size_t i = 0; i < grid.count(); ++i) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, pixels);
    const auto& a = grid.positions[i];
    for (std::size_t r = 0; r < grid.side; ++r)
      for (std::size_t c = 0; c < grid.side; ++c)
        R(static_cast<Eigen::Index>(r * grid.side + c),
          static_cast<Eigen::Index>((a.row + r) * grid.image_width + a.col + c)) = 1.0;
    lhs += R.transpose() * R;
    rhs += R.transpose() * est.col(static_cast<Eigen::Index>(i));
  }
  const Eigen::VectorXd x = lhs.fullPivLu().solve(rhs);
  cdenoise::GrayImage out(noisy.width, noisy.height);
  for (Eigen::Index p = 0; p < pixels; ++p) out.pixels[static_cast<std::size_t>(p)] = x(p);
  return out;
}

// Minimum within-cluster sum of squares over all 2-partitions of the columns.
// Returns labels with column 0 in cluster 0.
inline std::vector<int> best_two_partition(const Eigen::MatrixXd& pts) {
  const int count = static_cast<int>(pts.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for (unsigned mask = 0; mask < (1u << (count - 1)); ++mask) {
    std::vector<int> labels(static_cast<std::size_t>(count), 0);
    for (int i = 1; i < count; ++i) labels[static_cast<std::size_t>(i)] = (mask >> (i - 1)) & 1u;
    double wcss = 0.0;
    for (int c = 0; c < 2; ++c) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(pts.rows());
      int members = 0;
      for (int i = 0; i < count; ++i)
        if (labels[static_cast<std::size_t>(i)] == c) {
          mean += pts.col(i);
          ++members;
        }
      if (members == 0) {
        wcss = std::numeric_limits<double>::infinity();
        break;
      }
      mean /= members;
      for (int i = 0; i < count; ++i)
        if (labels[static_cast<std::size_t>(i)] == c) wcss += (pts.col(i) - mean).squaredNorm();
    }
    if (wcss < best) {
      best = wcss;
      best_labels = labels;
    }
  }
  return best_labels;
}

// Relabels so ids appear in order of first occurrence.
template <typename T>
std::vector<int> canonical(const std::vector<T>& labels) {
  std::vector<int> out;
  std::vector<std::pair<T, int>> seen;
  for (const auto& l : labels) {
    int id = -1;
    for (const auto& [k, v] : seen)
      if (k == l) id = v;
    if (id < 0) {
      id = static_cast<int>(seen.size());
      seen.emplace_back(l, id);
    }
    out.push_back(id);
  }
  return out;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, cdenoise::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

// Random coupled dictionaries with unit common pairs and unit unique atoms.
inline cdenoise::DictionarySet random_dictionaries(Eigen::Index n, Eigen::Index k,
                                                   cdenoise::Rng& rng) {
  cdenoise::DictionarySet ds{random_matrix(n, k, rng), random_matrix(n, k, rng),
                             random_matrix(n, k, rng), random_matrix(n, k, rng)};
  for (Eigen::Index j = 0; j < k; ++j) {
    const double common = std::sqrt(ds.psi_c.col(j).squaredNorm() + ds.phi_c.col(j).squaredNorm());
    ds.psi_c.col(j) /= common;
    ds.phi_c.col(j) /= common;
    ds.psi.col(j).normalize();
    ds.phi.col(j).normalize();
  }
  return ds;
}

}  // namespace oracle
