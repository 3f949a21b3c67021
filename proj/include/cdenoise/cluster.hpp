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

namespace cdenoise {

struct ClusterAssignment {
  std::vector<std::uint32_t> labels;  // one per patch pair, in [0, clusters)
  std::size_t clusters = 0;
  Eigen::MatrixXd centroids;          // 2n x clusters, stacked [x; y] features

  std::vector<std::vector<std::size_t>> members() const;
};

// P / 64 clamped to [16, 512], never more than P.
std::size_t default_cluster_count(std::size_t patches);

// Average-linkage agglomerative clustering (Euclidean) of the feature
// columns down to `clusters` groups. Cluster ids follow the first member
// in column order.
std::vector<std::uint32_t> average_linkage(const Eigen::MatrixXd& features, std::size_t clusters);

// Clusters a seeded subsample of min(P, max(sample_cap, M)) stacked features
// hierarchically, then assigns all P pairs to the nearest subsample centroid
// (ties to the lowest id). Clusters left empty are refilled with the member
// of the largest cluster farthest from its centroid.
ClusterAssignment cluster_patches(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                                  std::size_t clusters, std::size_t sample_cap,
                                  std::uint64_t seed);

}  // namespace cdenoise
