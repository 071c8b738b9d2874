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

#include "rest/data.hpp"
#include "rest/tape.hpp"

namespace rest {

struct ModelConfig {
  std::uint32_t embedding_dim = 8;  // d
  // Attention weights are a plain weighted sum by default; softmax
  // normalization over the history is available behind this flag.
  bool attention_softmax = false;

  void validate() const;
};

// Tower widths after the 5d concat input.
inline constexpr std::uint32_t kTowerHidden1 = 32;
inline constexpr std::uint32_t kTowerHidden2 = 16;

// Every embedding table and network weight. Parameter order in all() is the
// snapshot/optimizer order; keep it stable.
struct ModelParams {
  std::uint32_t d = 0;
  bool attention_softmax = false;

  Parameter user_table;      // |U| x d
  Parameter item_table;      // |V| x d
  Parameter brand_table;     // |B| x d
  Parameter category_table;  // |C| x d

  // a(v_j, v_t): affine(4d -> 2d), relu, affine(2d -> 1)
  Parameter attn_w1, attn_b1, attn_w2, attn_b2;
  // SeNet excitation: 2 -> 1 -> 2, sigmoid gates
  Parameter senet_w1, senet_b1, senet_w2, senet_b2;
  // meta feature injection: 2d -> 2d -> d
  Parameter inject_w1, inject_b1, inject_w2, inject_b2;
  // semantic cluster projection: 2d -> 2d -> d
  Parameter proj_w1, proj_b1, proj_w2, proj_b2;
  // prediction tower: 5d -> 32 -> 16 -> 1
  Parameter tower_w1, tower_b1, tower_w2, tower_b2, tower_w3, tower_b3;

  static ModelParams init(std::uint32_t n_users, std::uint32_t n_items,
                          std::uint32_t n_brands, std::uint32_t n_categories,
                          const ModelConfig& cfg, std::uint64_t seed);

  // Canonical names in all() order; the snapshot layout.
  static const std::vector<std::string>& param_names();

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  void zero_grads();

  std::uint32_t n_items() const {
    return static_cast<std::uint32_t>(item_table.value.rows());
  }
};

// F_i: concat [e_b, e_c], per-field mean squeeze, 2->1->2 excitation with
// sigmoid gates, fields rescaled by 2*gate (scale-preserving at gate 0.5).
// Inputs are m x d, output m x 2d.
Tape::ValueId senet_select(Tape& t, ModelParams& mp, Tape::ValueId e_b,
                           Tape::ValueId e_c);

// E_warm = alpha * MLP(F) + e_i, one alpha per row; alpha in [0, 1] and is
// treated as a constant (no gradient through it).
Tape::ValueId meta_inject(Tape& t, ModelParams& mp, Tape::ValueId f,
                          Tape::ValueId e_i, std::vector<double> alphas);

// V_u for one record: weighted-sum pooling of the history against the
// target item. history is |H| x d; |H| = 0 yields the zero vector.
Tape::ValueId user_interest(Tape& t, ModelParams& mp, Tape::ValueId history,
                            Tape::ValueId target);
Tape::ValueId zero_interest(Tape& t, std::uint32_t d);

// P_ui = sigmoid(tower(V_u || e_u || e_warm || e_b || e_c)); all inputs m x d,
// output m x 1 strictly inside (0, 1).
Tape::ValueId predict(Tape& t, ModelParams& mp, Tape::ValueId v_u,
                      Tape::ValueId e_u, Tape::ValueId e_warm,
                      Tape::ValueId e_b, Tape::ValueId e_c);

// Full base-tower scoring of a record batch. `alphas` holds one enhancement
// weight per record (ignored when use_warm is false).
Tape::ValueId forward_scores(Tape& t, ModelParams& mp, const Dataset& ds,
                             std::span<const std::uint32_t> record_idx,
                             const std::vector<double>& alphas, bool use_warm);

}  // namespace rest
