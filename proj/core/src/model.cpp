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

#include "rest/model.hpp"

#include <cmath>

#include "rest/errors.hpp"
#include "rest/rng.hpp"

namespace rest {

namespace {

Tensor uniform_table(Rng& rng, std::size_t rows, std::size_t cols, double bound) {
  Tensor t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-bound, bound);
  return t;
}

// Kaiming-style fan-in init for affine weights.
Tensor fan_in_weights(Rng& rng, std::size_t rows, std::size_t cols) {
  Tensor t(rows, cols);
  const double stddev = std::sqrt(2.0 / static_cast<double>(rows));
  for (double& v : t.values()) v = rng.gaussian(0.0, stddev);
  return t;
}

}  // namespace

void ModelConfig::validate() const {
  if (embedding_dim == 0) throw ConfigError("model: embedding_dim must be >= 1");
}

ModelParams ModelParams::init(std::uint32_t n_users, std::uint32_t n_items,
                              std::uint32_t n_brands, std::uint32_t n_categories,
                              const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (n_users == 0 || n_items == 0 || n_brands == 0 || n_categories == 0) {
    throw ConfigError("model: empty vocabulary");
  }
  const std::uint32_t d = cfg.embedding_dim;
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  Rng rng(seed);

  ModelParams mp;
  mp.d = d;
  mp.attention_softmax = cfg.attention_softmax;

  mp.user_table = Parameter("user_table", uniform_table(rng, n_users, d, bound));
  mp.item_table = Parameter("item_table", uniform_table(rng, n_items, d, bound));
  mp.brand_table = Parameter("brand_table", uniform_table(rng, n_brands, d, bound));
  mp.category_table =
      Parameter("category_table", uniform_table(rng, n_categories, d, bound));

  mp.attn_w1 = Parameter("attn.w1", fan_in_weights(rng, 4 * d, 2 * d));
  mp.attn_b1 = Parameter("attn.b1", Tensor(1, 2 * d));
  mp.attn_w2 = Parameter("attn.w2", fan_in_weights(rng, 2 * d, 1));
  mp.attn_b2 = Parameter("attn.b2", Tensor(1, 1));

  mp.senet_w1 = Parameter("senet.w1", fan_in_weights(rng, 2, 1));
  mp.senet_b1 = Parameter("senet.b1", Tensor(1, 1));
  mp.senet_w2 = Parameter("senet.w2", fan_in_weights(rng, 1, 2));
  mp.senet_b2 = Parameter("senet.b2", Tensor(1, 2));

  mp.inject_w1 = Parameter("inject.w1", fan_in_weights(rng, 2 * d, 2 * d));
  mp.inject_b1 = Parameter("inject.b1", Tensor(1, 2 * d));
  mp.inject_w2 = Parameter("inject.w2", fan_in_weights(rng, 2 * d, d));
  mp.inject_b2 = Parameter("inject.b2", Tensor(1, d));

  mp.proj_w1 = Parameter("proj.w1", fan_in_weights(rng, 2 * d, 2 * d));
  mp.proj_b1 = Parameter("proj.b1", Tensor(1, 2 * d));
  mp.proj_w2 = Parameter("proj.w2", fan_in_weights(rng, 2 * d, d));
  mp.proj_b2 = Parameter("proj.b2", Tensor(1, d));

  mp.tower_w1 = Parameter("tower.w1", fan_in_weights(rng, 5 * d, kTowerHidden1));
  mp.tower_b1 = Parameter("tower.b1", Tensor(1, kTowerHidden1));
  mp.tower_w2 =
      Parameter("tower.w2", fan_in_weights(rng, kTowerHidden1, kTowerHidden2));
  mp.tower_b2 = Parameter("tower.b2", Tensor(1, kTowerHidden2));
  mp.tower_w3 = Parameter("tower.w3", fan_in_weights(rng, kTowerHidden2, 1));
  mp.tower_b3 = Parameter("tower.b3", Tensor(1, 1));
  return mp;
}

const std::vector<std::string>& ModelParams::param_names() {
  static const std::vector<std::string> names = {
      "user_table", "item_table",  "brand_table", "category_table",
      "attn.w1",    "attn.b1",     "attn.w2",     "attn.b2",
      "senet.w1",   "senet.b1",    "senet.w2",    "senet.b2",
      "inject.w1",  "inject.b1",   "inject.w2",   "inject.b2",
      "proj.w1",    "proj.b1",     "proj.w2",     "proj.b2",
      "tower.w1",   "tower.b1",    "tower.w2",    "tower.b2",
      "tower.w3",   "tower.b3"};
  return names;
}

std::vector<Parameter*> ModelParams::all() {
  return {&user_table, &item_table,  &brand_table, &category_table,
          &attn_w1,    &attn_b1,     &attn_w2,     &attn_b2,
          &senet_w1,   &senet_b1,    &senet_w2,    &senet_b2,
          &inject_w1,  &inject_b1,   &inject_w2,   &inject_b2,
          &proj_w1,    &proj_b1,     &proj_w2,     &proj_b2,
          &tower_w1,   &tower_b1,    &tower_w2,    &tower_b2,
          &tower_w3,   &tower_b3};
}

std::vector<const Parameter*> ModelParams::all() const {
  auto ptrs = const_cast<ModelParams*>(this)->all();
  return {ptrs.begin(), ptrs.end()};
}

void ModelParams::zero_grads() {
  for (Parameter* p : all()) p->zero_grad();
}

Tape::ValueId senet_select(Tape& t, ModelParams& mp, Tape::ValueId e_b,
                           Tape::ValueId e_c) {
  const Tape::ValueId parts[] = {e_b, e_c};
  const auto f = t.concat_cols(parts);
  const auto z = t.field_means(f, 2);
  const auto h = t.relu(t.affine(z, mp.senet_w1, mp.senet_b1));
  const auto g = t.sigmoid(t.affine(h, mp.senet_w2, mp.senet_b2));
  const auto gates = t.repeat_cols(t.scale(g, 2.0), mp.d);
  return t.mul(f, gates);
}

Tape::ValueId meta_inject(Tape& t, ModelParams& mp, Tape::ValueId f,
                          Tape::ValueId e_i, std::vector<double> alphas) {
  const auto h = t.relu(t.affine(f, mp.inject_w1, mp.inject_b1));
  const auto m = t.affine(h, mp.inject_w2, mp.inject_b2);
  return t.add(t.row_scale(m, std::move(alphas)), e_i);
}

Tape::ValueId zero_interest(Tape& t, std::uint32_t d) {
  return t.constant(Tensor(1, d));
}

Tape::ValueId user_interest(Tape& t, ModelParams& mp, Tape::ValueId history,
                            Tape::ValueId target) {
  const std::size_t h_len = t.value(history).rows();
  if (h_len == 0) return zero_interest(t, mp.d);
  const auto tgt = t.broadcast_rows(target, h_len);
  const auto diff = t.sub(history, tgt);
  const auto prod = t.mul(history, tgt);
  const Tape::ValueId feats[] = {history, tgt, diff, prod};
  const auto x = t.concat_cols(feats);
  const auto a1 = t.relu(t.affine(x, mp.attn_w1, mp.attn_b1));
  auto w = t.affine(a1, mp.attn_w2, mp.attn_b2);  // |H| x 1
  if (mp.attention_softmax) {
    w = t.transpose(t.softmax_rows(t.transpose(w)));
  }
  return t.matmul(t.transpose(w), history);  // 1 x d
}

Tape::ValueId predict(Tape& t, ModelParams& mp, Tape::ValueId v_u,
                      Tape::ValueId e_u, Tape::ValueId e_warm,
                      Tape::ValueId e_b, Tape::ValueId e_c) {
  const Tape::ValueId parts[] = {v_u, e_u, e_warm, e_b, e_c};
  const auto x = t.concat_cols(parts);
  const auto h1 = t.relu(t.affine(x, mp.tower_w1, mp.tower_b1));
  const auto h2 = t.relu(t.affine(h1, mp.tower_w2, mp.tower_b2));
  return t.sigmoid(t.affine(h2, mp.tower_w3, mp.tower_b3));
}

Tape::ValueId forward_scores(Tape& t, ModelParams& mp, const Dataset& ds,
                             std::span<const std::uint32_t> record_idx,
                             const std::vector<double>& alphas, bool use_warm) {
  const std::size_t m = record_idx.size();
  if (m == 0) throw ContractError("forward_scores: empty batch");
  if (use_warm && alphas.size() != m) {
    throw DimensionError("forward_scores: " + std::to_string(alphas.size()) +
                         " alphas for " + std::to_string(m) + " records");
  }
  std::vector<std::uint32_t> users(m), items(m), brands(m), cats(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& rec = ds.records[record_idx[r]];
    users[r] = rec.user_id;
    items[r] = rec.item_id;
    brands[r] = ds.catalog.brand_of[rec.item_id];
    cats[r] = ds.catalog.category_of[rec.item_id];
  }
  const auto e_u = t.lookup(mp.user_table, users);
  const auto e_i = t.lookup(mp.item_table, items);
  const auto e_b = t.lookup(mp.brand_table, brands);
  const auto e_c = t.lookup(mp.category_table, cats);

  // The warm embedding replaces the candidate's ID representation
  // everywhere it is consumed: as the attention target and in the tower.
  Tape::ValueId e_item = e_i;
  if (use_warm) {
    const auto f = senet_select(t, mp, e_b, e_c);
    e_item = meta_inject(t, mp, f, e_i, alphas);
  }

  std::vector<Tape::ValueId> interest_rows;
  interest_rows.reserve(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& rec = ds.records[record_idx[r]];
    if (rec.history.empty()) {
      interest_rows.push_back(zero_interest(t, mp.d));
      continue;
    }
    const auto hist = t.lookup(mp.item_table, rec.history);
    const auto target = t.slice_rows(e_item, r, 1);
    interest_rows.push_back(user_interest(t, mp, hist, target));
  }
  const auto v_u = t.concat_rows(interest_rows);

  return predict(t, mp, v_u, e_u, e_item, e_b, e_c);
}

}  // namespace rest
