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

#include "rest/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "rest/errors.hpp"

namespace rest {

namespace {

double similarity(std::span<const double> a, std::span<const double> b,
                  bool cosine) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  if (!cosine) return dot;
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb) + 1e-12);
}

bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.item < b.item;
}

}  // namespace

void SamplingConfig::validate() const {
  if (pos_radius_km < 0.0 || neg_radius_km < 0.0) {
    throw ConfigError("sampling: radii must be >= 0");
  }
  if (k_negatives < 1) throw ConfigError("sampling: k_negatives must be >= 1");
}

AblationMode parse_ablation_mode(const std::string& token) {
  if (token == "full") return AblationMode::kFull;
  if (token == "rest1_random_neg") return AblationMode::kRandomNeg;
  if (token == "rest2_category_only") return AblationMode::kCategoryOnly;
  if (token == "rest3_brand_only") return AblationMode::kBrandOnly;
  if (token == "rest4_no_warmup") return AblationMode::kNoWarmup;
  throw ConfigError("unknown ablation mode '" + token + "'");
}

std::string ablation_mode_token(AblationMode mode) {
  switch (mode) {
    case AblationMode::kFull: return "full";
    case AblationMode::kRandomNeg: return "rest1_random_neg";
    case AblationMode::kCategoryOnly: return "rest2_category_only";
    case AblationMode::kBrandOnly: return "rest3_brand_only";
    case AblationMode::kNoWarmup: return "rest4_no_warmup";
  }
  throw ContractError("ablation_mode_token: bad enum value");
}

std::vector<CandidatePools> prior_knowledge_candidates(
    std::span<const std::uint32_t> batch_items, const ItemCatalog& catalog,
    PositiveRule rule) {
  {
    std::vector<std::uint32_t> distinct(batch_items.begin(), batch_items.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
      throw ContractError("prior_knowledge_candidates: batch has fewer than 2 "
                          "distinct items");
    }
  }
  std::vector<CandidatePools> pools(batch_items.size());
  for (std::size_t i = 0; i < batch_items.size(); ++i) {
    const std::uint32_t trig = batch_items[i];
    const std::uint32_t tb = catalog.brand_of[trig];
    const std::uint32_t tc = catalog.category_of[trig];
    for (std::size_t j = 0; j < batch_items.size(); ++j) {
      const std::uint32_t other = batch_items[j];
      if (other == trig) continue;
      const bool same_brand = catalog.brand_of[other] == tb;
      const bool same_cat = catalog.category_of[other] == tc;
      bool is_pos = false;
      switch (rule) {
        case PositiveRule::kBrandOrCategory: is_pos = same_brand || same_cat; break;
        case PositiveRule::kCategoryOnly: is_pos = same_cat; break;
        case PositiveRule::kBrandOnly: is_pos = same_brand; break;
      }
      if (is_pos) {
        pools[i].pos.push_back(other);
      } else if (!same_brand && !same_cat) {
        pools[i].neg.push_back(other);
      }
    }
  }
  return pools;
}

std::vector<ScoredItem> similarity_topk(std::span<const double> trigger_emb,
                                        std::span<const std::uint32_t> candidates,
                                        const Tensor& item_embeddings,
                                        std::size_t k, bool cosine) {
  if (k < 1) throw ContractError("similarity_topk: k must be >= 1");
  std::vector<ScoredItem> scored;
  scored.reserve(candidates.size());
  for (std::uint32_t c : candidates) {
    scored.push_back(
        {c, similarity(trigger_emb, item_embeddings.row_span(c), cosine)});
  }
  std::sort(scored.begin(), scored.end(), ranks_before);
  if (scored.size() > k) scored.resize(k);
  return scored;
}

std::vector<std::uint32_t> spatial_filter(std::uint32_t trigger,
                                          std::span<const std::uint32_t> candidates,
                                          const ItemCatalog& catalog,
                                          double radius_km) {
  if (radius_km < 0.0) {
    throw ContractError("spatial_filter: negative radius " +
                        std::to_string(radius_km));
  }
  const GeoPoint& t_loc = catalog.location_of[trigger];
  std::vector<std::uint32_t> out;
  if (std::isinf(radius_km)) {
    out.assign(candidates.begin(), candidates.end());
    return out;
  }
  for (std::uint32_t c : candidates) {
    if (haversine_km(t_loc, catalog.location_of[c]) <= radius_km)
      out.push_back(c);
  }
  return out;
}

ContrastiveBatch build_pairs(std::span<const std::uint32_t> batch_items,
                             const Tensor& item_embeddings,
                             const ItemCatalog& catalog,
                             const SamplingConfig& cfg, AblationMode mode,
                             Rng* sampler_rng) {
  cfg.validate();
  ContrastiveBatch cb;
  cb.stats.triggers = batch_items.size();

  std::vector<std::uint32_t> distinct(batch_items.begin(), batch_items.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    cb.stats.dropped_no_positive = batch_items.size();
    return cb;
  }

  PositiveRule rule = PositiveRule::kBrandOrCategory;
  if (mode == AblationMode::kCategoryOnly) rule = PositiveRule::kCategoryOnly;
  if (mode == AblationMode::kBrandOnly) rule = PositiveRule::kBrandOnly;

  const auto pools = prior_knowledge_candidates(batch_items, catalog, rule);

  double pos_pool_total = 0.0, neg_pool_total = 0.0;
  for (std::size_t i = 0; i < batch_items.size(); ++i) {
    pos_pool_total += static_cast<double>(pools[i].pos.size());
    neg_pool_total += static_cast<double>(pools[i].neg.size());
  }
  cb.stats.mean_pos_pool = pos_pool_total / static_cast<double>(batch_items.size());
  cb.stats.mean_neg_pool = neg_pool_total / static_cast<double>(batch_items.size());

  for (std::size_t i = 0; i < batch_items.size(); ++i) {
    const std::uint32_t trig = batch_items[i];
    const auto trig_emb = item_embeddings.row_span(trig);

    // Positive: attribute pool -> spatial constraint -> hardest survivor.
    const auto pos_nearby =
        spatial_filter(trig, pools[i].pos, catalog, cfg.pos_radius_km);
    if (pos_nearby.empty()) {
      ++cb.stats.dropped_no_positive;
      continue;
    }
    const auto best =
        similarity_topk(trig_emb, pos_nearby, item_embeddings, 1, cfg.cosine);

    ContrastivePair pair;
    pair.trigger = trig;
    pair.positive = best[0].item;
    pair.positive_similarity = best[0].similarity;

    if (mode == AblationMode::kRandomNeg) {
      // Uniform in-batch negatives, no attribute or spatial constraint.
      std::vector<std::uint32_t> avail;
      for (std::uint32_t it : distinct) {
        if (it != trig && it != pair.positive) avail.push_back(it);
      }
      const std::size_t want =
          std::min<std::size_t>(cfg.k_negatives, avail.size());
      for (std::size_t k = 0; k < want; ++k) {
        const std::size_t pick = sampler_rng->uniform_int(avail.size());
        const std::uint32_t item = avail[pick];
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
        pair.negatives.push_back(item);
        pair.negative_similarities.push_back(
            similarity(trig_emb, item_embeddings.row_span(item), cfg.cosine));
      }
    } else {
      const auto neg_nearby =
          spatial_filter(trig, pools[i].neg, catalog, cfg.neg_radius_km);
      const auto ranked = similarity_topk(trig_emb, neg_nearby, item_embeddings,
                                          cfg.k_negatives, cfg.cosine);
      for (const auto& s : ranked) {
        pair.negatives.push_back(s.item);
        pair.negative_similarities.push_back(s.similarity);
      }
    }

    if (pair.negatives.empty()) {
      ++cb.stats.dropped_no_negative;
      continue;
    }
    cb.pairs.push_back(std::move(pair));
  }
  cb.stats.pairs_built = cb.pairs.size();
  return cb;
}

}  // namespace rest
