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

#include "rest/alignment.hpp"

#include <cmath>

#include "rest/errors.hpp"

namespace rest {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

void AlignmentConfig::validate() const {
  if (n_clusters == 0) throw ConfigError("alignment: n_clusters must be >= 1");
  if (epsilon <= 0.0) throw ConfigError("alignment: epsilon must be > 0");
}

std::vector<double> project_attributes(const ModelParams& mp,
                                       std::uint32_t brand_id,
                                       std::uint32_t category_id) {
  const std::uint32_t d = mp.d;
  std::vector<double> x(2 * d);
  {
    auto eb = mp.brand_table.value.row_span(brand_id);
    auto ec = mp.category_table.value.row_span(category_id);
    std::copy(eb.begin(), eb.end(), x.begin());
    std::copy(ec.begin(), ec.end(), x.begin() + d);
  }
  // affine(2d -> 2d) + relu
  std::vector<double> h(2 * d);
  for (std::uint32_t j = 0; j < 2 * d; ++j) {
    double acc = mp.proj_b1.value.at(0, j);
    for (std::uint32_t k = 0; k < 2 * d; ++k)
      acc += x[k] * mp.proj_w1.value.at(k, j);
    h[j] = std::max(0.0, acc);
  }
  // affine(2d -> d)
  std::vector<double> out(d);
  for (std::uint32_t j = 0; j < d; ++j) {
    double acc = mp.proj_b2.value.at(0, j);
    for (std::uint32_t k = 0; k < 2 * d; ++k)
      acc += h[k] * mp.proj_w2.value.at(k, j);
    out[j] = acc;
  }
  return out;
}

void kmeans_update(const std::vector<std::vector<double>>& points,
                   ClusterState& state) {
  for (const auto& a : points) {
    if (a.size() != state.centroids.cols()) {
      throw DimensionError("kmeans_update: point width " +
                           std::to_string(a.size()) + " vs centroids " +
                           state.centroids.shape_str());
    }
    if (state.size < state.capacity()) {
      bool duplicate = false;
      for (std::uint32_t c = 0; c < state.size && !duplicate; ++c) {
        duplicate = std::equal(a.begin(), a.end(),
                               state.centroids.row_span(c).begin());
      }
      if (!duplicate) {
        auto dst = state.centroids.row_span(state.size);
        std::copy(a.begin(), a.end(), dst.begin());
        state.counts[state.size] = 1;
        ++state.size;
        continue;
      }
    }
    const std::uint32_t c = nearest_centroid(a, state);
    auto row = state.centroids.row_span(c);
    const double inv = 1.0 / static_cast<double>(++state.counts[c]);
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] += inv * (a[j] - row[j]);
  }
}

std::uint32_t nearest_centroid(std::span<const double> e,
                               const ClusterState& state) {
  if (state.size == 0) {
    throw ContractError("nearest_centroid: no seeded centroids");
  }
  std::uint32_t best = 0;
  double best_d = sq_dist(e, state.centroids.row_span(0));
  for (std::uint32_t c = 1; c < state.size; ++c) {
    const double d = sq_dist(e, state.centroids.row_span(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double enhancement_weight(std::span<const double> e, std::span<const double> r,
                          double epsilon) {
  if (epsilon <= 0.0) throw ContractError("enhancement_weight: epsilon <= 0");
  double dot = 0.0, ne = 0.0, nr = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    dot += e[i] * r[i];
    ne += e[i] * e[i];
    nr += r[i] * r[i];
  }
  const double cosine = dot / (std::sqrt(ne) * std::sqrt(nr) + epsilon);
  return 1.0 - 0.5 * (cosine + 1.0);
}

double item_alpha(const ModelParams& mp, const ClusterState& state,
                  std::uint32_t item_id, double epsilon) {
  if (state.size == 0) return 0.5;
  const auto e = mp.item_table.value.row_span(item_id);
  const std::uint32_t m = nearest_centroid(e, state);
  return enhancement_weight(e, state.centroids.row_span(m), epsilon);
}

}  // namespace rest
