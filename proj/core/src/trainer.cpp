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

#include "rest/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rest/errors.hpp"
#include "rest/losses.hpp"
#include "rest/optimizer.hpp"
#include "rest/rng.hpp"

namespace rest {

namespace {

// Distinct RNG streams so the sampler cannot perturb batch order.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kSamplerStream = 0xc2b2ae3d27d4eb4full;

}  // namespace

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("train: batch_size must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("train: learning_rate must be > 0");
  if (lr_decay_factor <= 0.0 || lr_decay_factor > 1.0) {
    throw ConfigError("train: lr_decay_factor outside (0, 1]");
  }
  if (lr_decay_period == 0) throw ConfigError("train: lr_decay_period must be >= 1");
  if (temperature <= 0.0) throw ConfigError("train: temperature must be > 0");
  if (alpha2 < 0.0) throw ConfigError("train: alpha2 must be >= 0");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw ConfigError("train: betas outside [0, 1)");
  }
  if (weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
}

TrainResult train(const Dataset& ds, const ModelConfig& mcfg,
                  const TrainConfig& tcfg, const SamplingConfig& scfg,
                  const AlignmentConfig& acfg, std::uint32_t n_users_hint) {
  mcfg.validate();
  tcfg.validate();
  scfg.validate();
  acfg.validate();
  if (ds.records.empty()) throw ConfigError("train: empty dataset");

  ModelParams mp = ModelParams::init(std::max(ds.n_users(), n_users_hint),
                                     static_cast<std::uint32_t>(ds.catalog.n_items()),
                                     ds.catalog.n_brands, ds.catalog.n_categories,
                                     mcfg, tcfg.seed);
  ClusterState state(acfg.n_clusters, mcfg.embedding_dim);
  AdamW opt(mp.all(),
            {tcfg.beta1, tcfg.beta2, 1e-8, tcfg.weight_decay});
  Rng shuffle_rng(tcfg.seed ^ kShuffleStream);
  Rng sampler_rng(tcfg.seed ^ kSamplerStream);

  const bool sidenet = !tcfg.disable_sidenet;
  const bool use_warm = sidenet && tcfg.mode != AblationMode::kNoWarmup;

  TrainReport report;
  report.mode_label =
      (tcfg.mode == AblationMode::kNoWarmup && tcfg.alpha2 == 0.0)
          ? "baseline"
          : ablation_mode_token(tcfg.mode);

  std::vector<std::uint32_t> order(ds.records.size());
  std::iota(order.begin(), order.end(), 0u);

  std::uint64_t global_step = 0;
  for (std::uint32_t epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);

    EpochStats es;
    es.epoch = epoch;
    std::size_t steps = 0;
    double ce_sum = 0.0, cl_sum = 0.0, alpha_sum = 0.0;

    for (std::size_t start = 0; start < order.size(); start += tcfg.batch_size) {
      const std::size_t m = std::min<std::size_t>(tcfg.batch_size,
                                                  order.size() - start);
      const std::span<const std::uint32_t> batch(order.data() + start, m);

      mp.zero_grads();

      // Unique candidate items, ascending: the trigger set.
      std::vector<std::uint32_t> uniq;
      uniq.reserve(m);
      for (std::uint32_t ri : batch) uniq.push_back(ds.records[ri].item_id);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

      // Dynamic alignment: project, cluster, weight.
      std::unordered_map<std::uint32_t, double> alpha;
      std::vector<double> rec_alpha;
      double batch_alpha_mean = 0.0;
      if (sidenet) {
        std::vector<std::vector<double>> points;
        points.reserve(uniq.size());
        for (std::uint32_t id : uniq) {
          points.push_back(project_attributes(mp, ds.catalog.brand_of[id],
                                              ds.catalog.category_of[id]));
        }
        kmeans_update(points, state);
        for (std::uint32_t id : uniq) {
          alpha[id] = item_alpha(mp, state, id, acfg.epsilon);
        }
        rec_alpha.reserve(m);
        for (std::uint32_t ri : batch) {
          rec_alpha.push_back(alpha.at(ds.records[ri].item_id));
        }
        batch_alpha_mean =
            std::accumulate(rec_alpha.begin(), rec_alpha.end(), 0.0) /
            static_cast<double>(m);
      }

      Tape tape;
      const auto preds = forward_scores(tape, mp, ds, batch, rec_alpha, use_warm);
      std::vector<double> labels(m);
      for (std::size_t r = 0; r < m; ++r) {
        labels[r] = static_cast<double>(ds.records[batch[r]].label);
      }
      const auto ce = tape.bce_mean(preds, std::move(labels));
      const double ce_val = tape.value(ce).item();

      auto loss = ce;
      double cl_val = 0.0;
      ContrastiveBatch cb;
      if (sidenet) {
        cb = build_pairs(uniq, mp.item_table.value, ds.catalog, scfg, tcfg.mode,
                         &sampler_rng);
        if (!cb.empty()) {
          if (tcfg.alpha2 != 0.0) {
            const auto cl = infonce_graph(tape, mp, ds.catalog, cb, alpha,
                                          tcfg.temperature,
                                          tcfg.contrastive_on_warm);
            cl_val = tape.value(cl).item();
            loss = tape.add(ce, tape.scale(cl, tcfg.alpha2));
          } else {
            // Contrastive term is off; evaluate it for the report only.
            std::vector<double> trig_alpha;
            trig_alpha.reserve(cb.pairs.size());
            for (const auto& pair : cb.pairs)
              trig_alpha.push_back(alpha.at(pair.trigger));
            cl_val = infonce_loss(cb, mp.item_table.value, trig_alpha,
                                  tcfg.temperature)
                         .loss;
          }
        }
      }

      const double loss_val = tape.value(loss).item();
      if (!std::isfinite(loss_val)) {
        throw NumericError("train: non-finite loss at step " +
                           std::to_string(global_step));
      }

      tape.backward(loss);
      opt.step(lr_at(global_step, tcfg.learning_rate, tcfg.lr_decay_factor,
                     tcfg.lr_decay_period));
      es.lr = lr_at(global_step, tcfg.learning_rate, tcfg.lr_decay_factor,
                    tcfg.lr_decay_period);
      ++global_step;

      report.step_ce.push_back(ce_val);
      report.step_cl.push_back(cl_val);
      ce_sum += ce_val;
      cl_sum += cl_val;
      alpha_sum += batch_alpha_mean;
      es.pairs_built += cb.stats.pairs_built;
      es.dropped_no_positive += cb.stats.dropped_no_positive;
      es.dropped_no_negative += cb.stats.dropped_no_negative;
      ++steps;
    }

    if (steps > 0) {
      es.mean_ce = ce_sum / static_cast<double>(steps);
      es.mean_cl = cl_sum / static_cast<double>(steps);
      es.mean_alpha = alpha_sum / static_cast<double>(steps);
    }
    report.epochs.push_back(es);
  }

  return TrainResult{std::move(mp), std::move(state), std::move(report)};
}

}  // namespace rest
