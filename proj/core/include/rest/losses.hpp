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
#include <unordered_map>
#include <vector>

#include "rest/model.hpp"
#include "rest/sampling.hpp"
#include "rest/tape.hpp"

namespace rest {

// Mean binary cross entropy with probabilities clamped to
// [1e-12, 1 - 1e-12]. Same formula as Tape::bce_mean.
double ce_loss(std::span<const double> preds, std::span<const int> labels);

struct InfoNceValue {
  double loss = 0.0;                // alpha-weighted mean over triggers
  std::vector<double> per_trigger;  // unweighted l_i
  std::vector<double> alphas;       // weights applied
};

// l_i = logsumexp over {positive, negatives} of dot(E_t, E_j)/tau minus the
// positive logit; loss = mean of alpha_i * l_i. Similarities are raw dot
// products of the rows of `item_embeddings`. Empty batch -> 0.
InfoNceValue infonce_loss(const ContrastiveBatch& cb,
                          const Tensor& item_embeddings,
                          std::span<const double> trigger_alphas, double tau);

// ce + alpha2 * cl; the per-item alpha factor is already inside cl.
double final_loss(double ce, double cl, double alpha2);

// base_lr * factor^floor(step / period).
double lr_at(std::uint64_t step, double base_lr, double factor = 0.9,
             std::uint32_t period = 500);

// Differentiable InfoNCE. Gradients flow into the item table (and, when
// on_warm is set, through the warm-up path); the alpha weights are
// constants. Returns a scalar node; empty batch -> constant 0.
Tape::ValueId infonce_graph(Tape& t, ModelParams& mp,
                            const ItemCatalog& catalog,
                            const ContrastiveBatch& cb,
                            const std::unordered_map<std::uint32_t, double>& item_alphas,
                            double tau, bool on_warm);

}  // namespace rest
