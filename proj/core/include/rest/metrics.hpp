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

#include "rest/alignment.hpp"
#include "rest/data.hpp"
#include "rest/model.hpp"

namespace rest {

// One ranking list: candidates of a request in presentation order.
struct ScoredGroup {
  std::uint32_t request_id = 0;
  std::vector<double> scores;
  std::vector<int> labels;
};

struct MetricsReport {
  double auc = 0.0;
  double mrr = 0.0;
  double ndcg5 = 0.0;
  double ndcg10 = 0.0;
  std::size_t records = 0;
  std::size_t groups = 0;
  std::size_t groups_without_positive = 0;
  double positive_rate = 0.0;
};

// Global pairwise AUC, ties counted 0.5. Throws ContractError on
// single-class input (the metric is undefined there).
double auc(std::span<const double> scores, std::span<const int> labels);

// Mean reciprocal rank of the first positive per group; ranking by
// descending score, ties by ascending candidate order. Groups without a
// positive are skipped and counted into *skipped.
double mrr(const std::vector<ScoredGroup>& groups, std::size_t* skipped = nullptr);

// Binary-gain NDCG@k averaged over groups with at least one positive.
double ndcg_at_k(const std::vector<ScoredGroup>& groups, std::size_t k,
                 std::size_t* skipped = nullptr);

std::vector<ScoredGroup> group_by_request(const Dataset& ds,
                                          std::span<const double> scores);

// Scores every record with the frozen snapshot (warm embeddings with alpha
// from `clusters` when use_warm) and assembles the full report. AUC is set
// to NaN when the labels are single-class.
MetricsReport evaluate_model(ModelParams& mp, const ClusterState& clusters,
                             bool use_warm, double epsilon, const Dataset& ds);

// The raw per-record scores behind evaluate_model, in record order.
std::vector<double> score_records(ModelParams& mp, const ClusterState& clusters,
                                  bool use_warm, double epsilon,
                                  const Dataset& ds);

}  // namespace rest
