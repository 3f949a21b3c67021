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

#include "cdenoise/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cdenoise/error.hpp"
#include "cdenoise/rng.hpp"

namespace cdenoise {

namespace {

struct Merge {
  Eigen::Index a;
  Eigen::Index b;
  double height;
};

Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    auto& p = parent[static_cast<std::size_t>(i)];
    p = parent[static_cast<std::size_t>(p)];
    i = p;
  }
  return i;
}

// Nearest-neighbour chain with Lance-Williams average-linkage updates.
std::vector<Merge> nn_chain_average(Eigen::MatrixXd dist) {
  const Eigen::Index count = dist.rows();
  std::vector<double> size(static_cast<std::size_t>(count), 1.0);
  std::vector<char> alive(static_cast<std::size_t>(count), 1);
  std::vector<Eigen::Index> chain;
  std::vector<Merge> merges;
  merges.reserve(static_cast<std::size_t>(count > 0 ? count - 1 : 0));

  Eigen::Index remaining = count;
  Eigen::Index first_alive = 0;
  while (remaining > 1) {
    if (chain.empty()) {
      while (!alive[static_cast<std::size_t>(first_alive)]) ++first_alive;
      chain.push_back(first_alive);
    }
    const Eigen::Index a = chain.back();
    const Eigen::Index prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
    Eigen::Index b = prev;
    double best = prev >= 0 ? dist(a, prev) : std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < count; ++c) {
      if (c == a || !alive[static_cast<std::size_t>(c)]) continue;
      if (dist(a, c) < best || (b < 0 && dist(a, c) <= best)) {
        best = dist(a, c);
        b = c;
      }
    }
    if (b != prev) {
      chain.push_back(b);
      continue;
    }
    chain.pop_back();
    chain.pop_back();
    const Eigen::Index keep = std::min(a, b);
    const Eigen::Index drop = std::max(a, b);
    merges.push_back({a, b, best});
    const double sa = size[static_cast<std::size_t>(keep)];
    const double sb = size[static_cast<std::size_t>(drop)];
    for (Eigen::Index c = 0; c < count; ++c) {
      if (!alive[static_cast<std::size_t>(c)] || c == keep || c == drop) continue;
      const double d = (sa * dist(keep, c) + sb * dist(drop, c)) / (sa + sb);
      dist(keep, c) = d;
      dist(c, keep) = d;
    }
    size[static_cast<std::size_t>(keep)] = sa + sb;
    alive[static_cast<std::size_t>(drop)] = 0;
    --remaining;
  }
  return merges;
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& features) {
  const Eigen::VectorXd sq = features.colwise().squaredNorm().transpose();
  Eigen::MatrixXd dist = -2.0 * (features.transpose() * features);
  dist.colwise() += sq;
  dist.rowwise() += sq.transpose();
  dist = dist.cwiseMax(0.0).cwiseSqrt();
  dist.diagonal().setZero();
  return dist;
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(clusters);
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

std::size_t default_cluster_count(std::size_t patches) {
  return std::min(std::clamp<std::size_t>(patches / 64, 16, 512), patches);
}

std::vector<std::uint32_t> average_linkage(const Eigen::MatrixXd& features, std::size_t clusters) {
  const auto count = static_cast<std::size_t>(features.cols());
  if (clusters < 1 || clusters > count)
    fail(Errc::TooFewPatches, "cannot form " + std::to_string(clusters) + " clusters from " +
                                  std::to_string(count) + " points");
  std::vector<Eigen::Index> parent(count);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  if (clusters < count) {
    auto merges = nn_chain_average(pairwise_distances(features));
    std::stable_sort(merges.begin(), merges.end(),
                     [](const Merge& l, const Merge& r) { return l.height < r.height; });
    for (std::size_t m = 0; m < count - clusters; ++m) {
      const auto ra = find_root(parent, merges[m].a);
      const auto rb = find_root(parent, merges[m].b);
      parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
  }
  std::vector<std::uint32_t> labels(count);
  std::vector<std::int64_t> id_of_root(count, -1);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto root = static_cast<std::size_t>(find_root(parent, static_cast<Eigen::Index>(i)));
    if (id_of_root[root] < 0) id_of_root[root] = next++;
    labels[i] = static_cast<std::uint32_t>(id_of_root[root]);
  }
  return labels;
}

ClusterAssignment cluster_patches(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys,
                                  std::size_t clusters, std::size_t sample_cap,
                                  std::uint64_t seed) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols())
    fail(Errc::DimensionMismatch, "target and guide patch matrices differ in shape");
  const auto count = static_cast<std::size_t>(xs.cols());
  if (clusters < 1) fail(Errc::InvalidArgument, "need at least one cluster");
  if (count < clusters)
    fail(Errc::TooFewPatches, std::to_string(count) + " patches for " +
                                  std::to_string(clusters) + " clusters");
  const auto n = xs.rows();
  Eigen::MatrixXd features(2 * n, xs.cols());
  features.topRows(n) = xs;
  features.bottomRows(n) = ys;

  std::vector<std::size_t> subset(count);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  const std::size_t subset_size = std::min(count, std::max(sample_cap, clusters));
  if (subset_size < count) {
    Rng rng(seed);
    for (std::size_t i = 0; i < subset_size; ++i)
      std::swap(subset[i], subset[i + static_cast<std::size_t>(rng.index(count - i))]);
    subset.resize(subset_size);
    std::sort(subset.begin(), subset.end());
  }

  Eigen::MatrixXd sample(features.rows(), static_cast<Eigen::Index>(subset_size));
  for (std::size_t i = 0; i < subset_size; ++i)
    sample.col(static_cast<Eigen::Index>(i)) = features.col(static_cast<Eigen::Index>(subset[i]));
  const auto sample_labels = average_linkage(sample, clusters);

  ClusterAssignment out;
  out.clusters = clusters;
  out.centroids = Eigen::MatrixXd::Zero(features.rows(), static_cast<Eigen::Index>(clusters));
  std::vector<double> weight(clusters, 0.0);
  for (std::size_t i = 0; i < subset_size; ++i) {
    out.centroids.col(sample_labels[i]) += sample.col(static_cast<Eigen::Index>(i));
    weight[sample_labels[i]] += 1.0;
  }
  for (std::size_t c = 0; c < clusters; ++c)
    out.centroids.col(static_cast<Eigen::Index>(c)) /= weight[c];

  out.labels.resize(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const auto f = features.col(static_cast<Eigen::Index>(i));
    std::uint32_t best_id = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < clusters; ++c) {
      const double d = (f - out.centroids.col(static_cast<Eigen::Index>(c))).squaredNorm();
      if (d < best) {
        best = d;
        best_id = static_cast<std::uint32_t>(c);
      }
    }
    out.labels[static_cast<std::size_t>(i)] = best_id;
  }

  std::vector<std::size_t> sizes(clusters, 0);
  for (auto l : out.labels) ++sizes[l];
  for (std::size_t empty = 0; empty < clusters; ++empty) {
    if (sizes[empty] != 0) continue;
    const auto largest = static_cast<std::size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::size_t farthest = count;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (out.labels[i] != largest) continue;
      const double d = (features.col(static_cast<Eigen::Index>(i)) -
                        out.centroids.col(static_cast<Eigen::Index>(largest)))
                           .squaredNorm();
      if (d > far_dist) {
        far_dist = d;
        farthest = i;
      }
    }
    out.labels[farthest] = static_cast<std::uint32_t>(empty);
    out.centroids.col(static_cast<Eigen::Index>(empty)) =
        features.col(static_cast<Eigen::Index>(farthest));
    --sizes[largest];
    ++sizes[empty];
  }
  return out;
}

}  // namespace cdenoise
