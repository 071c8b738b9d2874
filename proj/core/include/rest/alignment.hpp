// Copyright 2026 The ReST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rest/model.hpp"
#include "rest/tensor.hpp"

namespace rest {

struct AlignmentConfig {
  std::uint32_t n_clusters = 50;  // N
  double epsilon = 1e-8;

  void validate() const;
};

// Mini-batch running-mean K-means state. Centroids are seeded from the
// first N distinct points seen, then each assigned point moves its centroid
// by (1/count) * (point - centroid). No gradient flows through any of this.
struct ClusterState {
  Tensor centroids;                  // N x d; rows >= size are unseeded
  std::vector<std::uint64_t> counts;  // per centroid, non-decreasing
  std::uint32_t size = 0;             // seeded centroids (prefix of rows)

  ClusterState() = default;
  ClusterState(std::uint32_t n_clusters, std::uint32_t d)
      : centroids(n_clusters, d), counts(n_clusters, 0) {}

  std::uint32_t capacity() const {
    return static_cast<std::uint32_t>(centroids.rows());
  }
};

// A = MLP(e_b || e_c), 2d -> 2d -> d with ReLU; computed on raw values.
std::vector<double> project_attributes(const ModelParams& mp,
                                       std::uint32_t brand_id,
                                       std::uint32_t category_id);

// Streams a batch of projected points into the state.
void kmeans_update(const std::vector<std::vector<double>>& points,
                   ClusterState& state);

// Index of the closest seeded centroid (Euclidean, ties to the smallest
// index). Requires at least one seeded centroid.
std::uint32_t nearest_centroid(std::span<const double> e,
                               const ClusterState& state);

// alpha = 1 - (cos(e, r) normalized into [0, 1]); in [0, 1], decreasing in
// the cosine. epsilon keeps zero vectors finite (cosine ~ 0 -> alpha 0.5).
double enhancement_weight(std::span<const double> e, std::span<const double> r,
                          double epsilon);

// Convenience: alpha for an item's current ID embedding against its nearest
// centroid. Falls back to 0.5 before any centroid is seeded.
double item_alpha(const ModelParams& mp, const ClusterState& state,
                  std::uint32_t item_id, double epsilon);

}  // namespace rest
