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
#include <string>
#include <vector>

#include "rest/alignment.hpp"
#include "rest/data.hpp"
#include "rest/model.hpp"
#include "rest/sampling.hpp"

namespace rest {

struct TrainConfig {
  std::uint32_t batch_size = 256;
  // Desk-scale default. The reference production setting pairs batch 10240
  // with learning rates 0.1-0.2; both are plain config values.
  double learning_rate = 0.01;
  double lr_decay_factor = 0.9;
  std::uint32_t lr_decay_period = 500;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.01;
  double temperature = 0.1;  // tau
  double alpha2 = 0.01;      // contrastive loss weight
  std::uint32_t epochs = 8;
  std::uint64_t seed = 7;
  AblationMode mode = AblationMode::kFull;
  // InfoNCE similarities use raw ID embeddings by default; this switches
  // them to the warm embeddings.
  bool contrastive_on_warm = false;
  // Base tower only: no warm-up, no sampling, no clustering. Used by the
  // degenerate-equivalence checks.
  bool disable_sidenet = false;

  void validate() const;
};

struct EpochStats {
  std::uint32_t epoch = 0;
  double mean_ce = 0.0;
  double mean_cl = 0.0;
  double mean_alpha = 0.0;
  std::size_t pairs_built = 0;
  std::size_t dropped_no_positive = 0;
  std::size_t dropped_no_negative = 0;
  double lr = 0.0;  // at the last step of the epoch
};

struct TrainReport {
  std::string mode_label;  // ablation token, or "baseline" for rest4+alpha2=0
  std::vector<EpochStats> epochs;
  std::vector<double> step_ce;
  std::vector<double> step_cl;
};

struct TrainResult {
  ModelParams params;
  ClusterState clusters;
  TrainReport report;
};

// One optimization step per batch: alignment update, base-tower CE with
// warm embeddings, spatially-constrained contrastive loss, AdamW.
// Deterministic under (data, configs, seed). n_users_hint grows the user
// table beyond the ids seen in `ds` (the eval split may hold the max id).
TrainResult train(const Dataset& ds, const ModelConfig& mcfg,
                  const TrainConfig& tcfg, const SamplingConfig& scfg,
                  const AlignmentConfig& acfg, std::uint32_t n_users_hint = 0);

}  // namespace rest
