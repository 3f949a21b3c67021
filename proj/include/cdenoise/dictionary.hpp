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

#include <Eigen/Dense>

namespace cdenoise {

// The four coupled dictionaries, each n x k with atoms as columns.
//   x = psi_c z + psi u       (target modality)
//   y = phi_c z + phi v       (guidance modality)
struct DictionarySet {
  Eigen::MatrixXd psi_c;
  Eigen::MatrixXd psi;
  Eigen::MatrixXd phi_c;
  Eigen::MatrixXd phi;

  std::size_t patch_dim() const noexcept { return static_cast<std::size_t>(psi_c.rows()); }
  std::size_t atoms() const noexcept { return static_cast<std::size_t>(psi_c.cols()); }

  // Throws ShapeMismatch unless all four matrices are n x k.
  void check_shapes() const;

  bool operator==(const DictionarySet& o) const {
    return psi_c == o.psi_c && psi == o.psi && phi_c == o.phi_c && phi == o.phi;
  }
};

}  // namespace cdenoise
