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

#include "rest/losses.hpp"

#include <algorithm>
#include <cmath>

#include "rest/errors.hpp"

namespace rest {

double ce_loss(std::span<const double> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw ContractError("ce_loss: " + std::to_string(preds.size()) +
                        " predictions vs " + std::to_string(labels.size()) +
                        " labels");
  }
  if (preds.empty()) throw ContractError("ce_loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double p = std::clamp(preds[i], kProbClamp, 1.0 - kProbClamp);
    const double y = static_cast<double>(labels[i]);
    acc += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return -acc / static_cast<double>(preds.size());
}

InfoNceValue infonce_loss(const ContrastiveBatch& cb,
                          const Tensor& item_embeddings,
                          std::span<const double> trigger_alphas, double tau) {
  if (tau <= 0.0) throw ContractError("infonce_loss: tau must be > 0");
  InfoNceValue out;
  if (cb.empty()) return out;
  if (trigger_alphas.size() != cb.pairs.size()) {
    throw ContractError("infonce_loss: " + std::to_string(trigger_alphas.size()) +
                        " alphas for " + std::to_string(cb.pairs.size()) +
                        " pairs");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < cb.pairs.size(); ++i) {
    const auto& pair = cb.pairs[i];
    const auto trig = item_embeddings.row_span(pair.trigger);
    auto dot_with = [&](std::uint32_t item) {
      const auto row = item_embeddings.row_span(item);
      double d = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) d += trig[j] * row[j];
      return d / tau;
    };
    std::vector<double> logits;
    logits.reserve(pair.negatives.size() + 1);
    logits.push_back(dot_with(pair.positive));
    for (std::uint32_t n : pair.negatives) logits.push_back(dot_with(n));
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - mx);
    const double li = mx + std::log(sum) - logits[0];
    out.per_trigger.push_back(li);
    out.alphas.push_back(trigger_alphas[i]);
    acc += trigger_alphas[i] * li;
  }
  out.loss = acc / static_cast<double>(cb.pairs.size());
  return out;
}

double final_loss(double ce, double cl, double alpha2) {
  if (!std::isfinite(ce) || !std::isfinite(cl)) {
    throw NumericError("final_loss: non-finite input");
  }
  return ce + alpha2 * cl;
}

double lr_at(std::uint64_t step, double base_lr, double factor,
             std::uint32_t period) {
  if (period == 0) throw ContractError("lr_at: period must be >= 1");
  return base_lr * std::pow(factor, static_cast<double>(step / period));
}

Tape::ValueId infonce_graph(Tape& t, ModelParams& mp,
                            const ItemCatalog& catalog,
                            const ContrastiveBatch& cb,
                            const std::unordered_map<std::uint32_t, double>& item_alphas,
                            double tau, bool on_warm) {
  if (tau <= 0.0) throw ContractError("infonce_graph: tau must be > 0");
  if (cb.empty()) return t.constant(Tensor::scalar(0.0));

  // Unique items touched by this batch, each embedded once.
  std::vector<std::uint32_t> ids;
  for (const auto& pair : cb.pairs) {
    ids.push_back(pair.trigger);
    ids.push_back(pair.positive);
    ids.insert(ids.end(), pair.negatives.begin(), pair.negatives.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::uint32_t, std::size_t> row_of;
  for (std::size_t r = 0; r < ids.size(); ++r) row_of[ids[r]] = r;

  Tape::ValueId emb = t.lookup(mp.item_table, ids);
  if (on_warm) {
    std::vector<std::uint32_t> brands(ids.size()), cats(ids.size());
    std::vector<double> alphas(ids.size());
    for (std::size_t r = 0; r < ids.size(); ++r) {
      brands[r] = catalog.brand_of[ids[r]];
      cats[r] = catalog.category_of[ids[r]];
      alphas[r] = item_alphas.at(ids[r]);
    }
    const auto e_b = t.lookup(mp.brand_table, brands);
    const auto e_c = t.lookup(mp.category_table, cats);
    const auto f = senet_select(t, mp, e_b, e_c);
    emb = meta_inject(t, mp, f, emb, std::move(alphas));
  }

  std::vector<Tape::ValueId> per_trigger;
  std::vector<double> weights;
  per_trigger.reserve(cb.pairs.size());
  for (const auto& pair : cb.pairs) {
    const auto trig = t.slice_rows(emb, row_of.at(pair.trigger), 1);
    std::vector<Tape::ValueId> cand_rows;
    cand_rows.push_back(t.slice_rows(emb, row_of.at(pair.positive), 1));
    for (std::uint32_t n : pair.negatives) {
      cand_rows.push_back(t.slice_rows(emb, row_of.at(n), 1));
    }
    const auto cands = t.concat_rows(cand_rows);
    const auto logits = t.scale(t.matmul(trig, t.transpose(cands)), 1.0 / tau);
    const auto lse = t.logsumexp_rows(logits);
    const auto pos_logit = t.slice_cols(logits, 0, 1);
    per_trigger.push_back(t.sub(lse, pos_logit));
    weights.push_back(item_alphas.at(pair.trigger));
  }
  const auto stacked = t.concat_rows(per_trigger);
  const auto weighted = t.row_scale(stacked, std::move(weights));
  return t.scale(t.sum_all(weighted),
                 1.0 / static_cast<double>(cb.pairs.size()));
}

}  // namespace rest
