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

#include <string>

#include "rest/alignment.hpp"
#include "rest/model.hpp"

namespace rest {

// Parameter snapshot: <prefix>.bin holds little-endian 64-bit reals,
// <prefix>.manifest is a plain-text index of named arrays with shapes and
// offsets. K-means centroids/counts ride along as kmeans.* arrays.
struct SnapshotMeta {
  std::uint32_t embedding_dim = 0;
  bool attention_softmax = false;
  std::string mode_token = "full";  // ablation mode the model was trained in
  bool use_warm = true;             // score with warm embeddings at eval time
};

struct Snapshot {
  ModelParams params;
  ClusterState clusters;
  SnapshotMeta meta;
};

void save_snapshot(const std::string& prefix, const ModelParams& mp,
                   const ClusterState& clusters, const SnapshotMeta& meta);

// Rejects shape mismatches and unknown layouts with DimensionError /
// ParseError.
Snapshot load_snapshot(const std::string& prefix);

}  // namespace rest
