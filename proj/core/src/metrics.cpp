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

#include "rest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "rest/errors.hpp"
#include "rest/tape.hpp"

namespace rest {

namespace {

// Indices ranking a group: descending score, ties by ascending position.
std::vector<std::size_t> ranked_order(const ScoredGroup& g) {
  std::vector<std::size_t> order(g.scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g.scores[a] > g.scores[b];
  });
  return order;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ContractError("auc: " + std::to_string(scores.size()) +
                        " scores vs " + std::to_string(labels.size()) +
                        " labels");
  }
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += static_cast<std::size_t>(l);
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw ContractError("auc: undefined on single-class input (" +
                        std::to_string(n_pos) + " positives, " +
                        std::to_string(n_neg) + " negatives)");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Rank-sum with average ranks over ties; equals pairwise counting with
  // the 0.5 tie convention.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

double mrr(const std::vector<ScoredGroup>& groups, std::size_t* skipped) {
  double acc = 0.0;
  std::size_t used = 0, skip = 0;
  for (const auto& g : groups) {
    const auto order = ranked_order(g);
    double rr = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (g.labels[order[r]] == 1) {
        rr = 1.0 / static_cast<double>(r + 1);
        break;
      }
    }
    if (rr == 0.0) {
      ++skip;
    } else {
      acc += rr;
      ++used;
    }
  }
  if (skipped) *skipped = skip;
  return used ? acc / static_cast<double>(used) : 0.0;
}

double ndcg_at_k(const std::vector<ScoredGroup>& groups, std::size_t k,
                 std::size_t* skipped) {
  if (k == 0) throw ContractError("ndcg_at_k: k must be >= 1");
  double acc = 0.0;
  std::size_t used = 0, skip = 0;
  for (const auto& g : groups) {
    std::size_t n_pos = 0;
    for (int l : g.labels) n_pos += static_cast<std::size_t>(l);
    if (n_pos == 0) {
      ++skip;
      continue;
    }
    const auto order = ranked_order(g);
    double dcg = 0.0;
    for (std::size_t r = 0; r < std::min(k, order.size()); ++r) {
      if (g.labels[order[r]] == 1) {
        dcg += 1.0 / std::log2(static_cast<double>(r + 2));
      }
    }
    double idcg = 0.0;
    for (std::size_t r = 0; r < std::min(k, n_pos); ++r) {
      idcg += 1.0 / std::log2(static_cast<double>(r + 2));
    }
    acc += dcg / idcg;
    ++used;
  }
  if (skipped) *skipped = skip;
  return used ? acc / static_cast<double>(used) : 0.0;
}

std::vector<ScoredGroup> group_by_request(const Dataset& ds,
                                          std::span<const double> scores) {
  if (scores.size() != ds.records.size()) {
    throw ContractError("group_by_request: " + std::to_string(scores.size()) +
                        " scores vs " + std::to_string(ds.records.size()) +
                        " records");
  }
  std::map<std::uint32_t, ScoredGroup> by_request;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    auto& g = by_request[r.request_id];
    g.request_id = r.request_id;
    g.scores.push_back(scores[i]);
    g.labels.push_back(r.label);
  }
  std::vector<ScoredGroup> out;
  out.reserve(by_request.size());
  for (auto& [id, g] : by_request) out.push_back(std::move(g));
  return out;
}

std::vector<double> score_records(ModelParams& mp, const ClusterState& clusters,
                                  bool use_warm, double epsilon,
                                  const Dataset& ds) {
  if (mp.item_table.value.rows() != ds.catalog.n_items() ||
      mp.brand_table.value.rows() != ds.catalog.n_brands ||
      mp.category_table.value.rows() != ds.catalog.n_categories) {
    throw DimensionError(
        "score_records: snapshot tables (items " +
        std::to_string(mp.item_table.value.rows()) + ", brands " +
        std::to_string(mp.brand_table.value.rows()) + ", categories " +
        std::to_string(mp.category_table.value.rows()) +
        ") do not match catalog (items " + std::to_string(ds.catalog.n_items()) +
        ", brands " + std::to_string(ds.catalog.n_brands) + ", categories " +
        std::to_string(ds.catalog.n_categories) + ")");
  }
  if (mp.user_table.value.rows() < ds.n_users()) {
    throw DimensionError("score_records: user table has " +
                         std::to_string(mp.user_table.value.rows()) +
                         " rows, dataset needs " + std::to_string(ds.n_users()));
  }

  // Frozen alpha per item, computed once on demand.
  std::unordered_map<std::uint32_t, double> alpha_cache;
  auto alpha_of = [&](std::uint32_t item) {
    auto it = alpha_cache.find(item);
    if (it != alpha_cache.end()) return it->second;
    const double a = item_alpha(mp, clusters, item, epsilon);
    alpha_cache.emplace(item, a);
    return a;
  };

  constexpr std::size_t kChunk = 512;
  std::vector<double> scores(ds.records.size());
  for (std::size_t start = 0; start < ds.records.size(); start += kChunk) {
    const std::size_t m = std::min(kChunk, ds.records.size() - start);
    std::vector<std::uint32_t> idx(m);
    std::iota(idx.begin(), idx.end(), static_cast<std::uint32_t>(start));
    std::vector<double> alphas;
    if (use_warm) {
      alphas.reserve(m);
      for (std::uint32_t i : idx) alphas.push_back(alpha_of(ds.records[i].item_id));
    }
    Tape tape;
    const auto preds = forward_scores(tape, mp, ds, idx, alphas, use_warm);
    const Tensor& pv = tape.value(preds);
    for (std::size_t r = 0; r < m; ++r) scores[start + r] = pv.at(r, 0);
  }
  return scores;
}

MetricsReport evaluate_model(ModelParams& mp, const ClusterState& clusters,
                             bool use_warm, double epsilon, const Dataset& ds) {
  MetricsReport rep;
  rep.records = ds.records.size();
  if (ds.records.empty()) {
    rep.auc = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const auto scores = score_records(mp, clusters, use_warm, epsilon, ds);
  std::vector<int> labels(ds.records.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    labels[i] = ds.records[i].label;
    positives += static_cast<std::size_t>(labels[i]);
  }
  rep.positive_rate =
      static_cast<double>(positives) / static_cast<double>(ds.records.size());

  try {
    rep.auc = auc(scores, labels);
  } catch (const ContractError&) {
    rep.auc = std::numeric_limits<double>::quiet_NaN();  // single-class split
  }

  const auto groups = group_by_request(ds, scores);
  rep.groups = groups.size();
  std::size_t skipped = 0;
  rep.mrr = mrr(groups, &skipped);
  rep.groups_without_positive = skipped;
  rep.ndcg5 = ndcg_at_k(groups, 5);
  rep.ndcg10 = ndcg_at_k(groups, 10);
  return rep;
}

}  // namespace rest
