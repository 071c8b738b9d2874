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
#include <string>
#include <vector>

#include "rest/data.hpp"
#include "rest/rng.hpp"
#include "rest/tensor.hpp"

namespace rest {

struct SamplingConfig {
  double pos_radius_km = 30.0;
  double neg_radius_km = 10.0;
  std::uint32_t k_negatives = 9;  // K
  bool cosine = false;            // similarity: raw dot product by default

  void validate() const;
};

enum class AblationMode {
  kFull,
  kRandomNeg,      // rest1: uniform in-batch negatives
  kCategoryOnly,   // rest2: positives share category only
  kBrandOnly,      // rest3: positives share brand only
  kNoWarmup,       // rest4: warm-up network removed
};

AblationMode parse_ablation_mode(const std::string& token);
std::string ablation_mode_token(AblationMode mode);

enum class PositiveRule { kBrandOrCategory, kCategoryOnly, kBrandOnly };

struct CandidatePools {
  std::vector<std::uint32_t> pos;  // share attribute per rule, exclude trigger
  std::vector<std::uint32_t> neg;  // share neither brand nor category
};

// Stage 1: attribute pools per trigger, built within the batch. Requires at
// least 2 distinct items.
std::vector<CandidatePools> prior_knowledge_candidates(
    std::span<const std::uint32_t> batch_items, const ItemCatalog& catalog,
    PositiveRule rule = PositiveRule::kBrandOrCategory);

struct ScoredItem {
  std::uint32_t item = 0;
  double similarity = 0.0;
};

// Stage 2: the k most similar candidates by embedding similarity, ties
// broken by ascending item id. Fewer than k candidates -> all, ranked.
std::vector<ScoredItem> similarity_topk(std::span<const double> trigger_emb,
                                        std::span<const std::uint32_t> candidates,
                                        const Tensor& item_embeddings,
                                        std::size_t k, bool cosine = false);

// Stage 3: candidates within radius_km of the trigger (inclusive).
std::vector<std::uint32_t> spatial_filter(std::uint32_t trigger,
                                          std::span<const std::uint32_t> candidates,
                                          const ItemCatalog& catalog,
                                          double radius_km);

struct ContrastivePair {
  std::uint32_t trigger = 0;
  std::uint32_t positive = 0;
  double positive_similarity = 0.0;
  std::vector<std::uint32_t> negatives;  // ranked by similarity, <= K
  std::vector<double> negative_similarities;
};

struct SamplingStats {
  std::size_t triggers = 0;
  std::size_t pairs_built = 0;
  std::size_t dropped_no_positive = 0;
  std::size_t dropped_no_negative = 0;
  double mean_pos_pool = 0.0;  // attribute-stage pool sizes
  double mean_neg_pool = 0.0;
};

struct ContrastiveBatch {
  std::vector<ContrastivePair> pairs;
  SamplingStats stats;

  bool empty() const { return pairs.empty(); }
};

// Stage 4: per trigger, positives run attribute -> spatial(pos radius) ->
// most-similar survivor; negatives run attribute -> spatial(neg radius) ->
// top-K by similarity. Triggers without a positive or without any negative
// are dropped (counted in stats). `sampler_rng` is consumed only in
// kRandomNeg mode.
ContrastiveBatch build_pairs(std::span<const std::uint32_t> batch_items,
                             const Tensor& item_embeddings,
                             const ItemCatalog& catalog,
                             const SamplingConfig& cfg, AblationMode mode,
                             Rng* sampler_rng);

}  // namespace rest
