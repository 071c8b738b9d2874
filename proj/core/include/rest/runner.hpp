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

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rest/config.hpp"
#include "rest/metrics.hpp"
#include "rest/trainer.hpp"

namespace rest {

// Command bodies behind the CLI. Each writes its artifacts (and the
// fully-resolved config echo) under `out_dir` and never mutates inputs;
// everything is reproducible from the echoed config alone.

struct GenerateSummary {
  std::size_t records = 0;
  std::size_t requests = 0;
  std::size_t items = 0;
  std::size_t users = 0;
  double positive_rate = 0.0;
};

// Writes catalog.csv + interactions.csv.
GenerateSummary run_generate(const RunConfig& cfg, const std::string& out_dir);

struct TrainOutcome {
  TrainReport report;
  MetricsReport eval_metrics;  // on the held-out split
};

// Trains on the train split of paths.log/catalog; writes snapshot.{bin,
// manifest}, train_report.{txt,csv}, steps.csv.
TrainOutcome run_train(const RunConfig& cfg, const std::string& out_dir);

struct EvaluateOutcome {
  MetricsReport full;
  std::optional<MetricsReport> cold;  // present when cold_start requested
};

// Scores paths.snapshot against the dataset; writes metrics.{txt,csv} and,
// with cold_start, metrics_coldstart.{txt,csv}.
EvaluateOutcome run_evaluate(const RunConfig& cfg, const std::string& out_dir,
                             bool cold_start);

// One grid point of a sweep: (column name, value) pairs to apply.
struct SweepSetting {
  std::vector<std::pair<std::string, double>> values;
};

// Default grids: radii is the 3x3 {5,10,30} x {5,10,30} block plus the
// unconstrained (inf, inf) row; k_negatives {3..15}, clusters {5..100},
// alpha2 {1e-5..1}.
std::vector<SweepSetting> sweep_grid(const std::string& axis);
RunConfig apply_sweep_setting(const RunConfig& base, const SweepSetting& s);

// axis in {radii, k_negatives, clusters, alpha2}; writes sweep_<axis>.csv
// with one row per setting, all runs sharing the seed.
void run_sweep(const RunConfig& cfg, const std::string& axis,
               const std::string& out_dir);
void run_sweep(const RunConfig& cfg, const std::string& axis,
               const std::string& out_dir,
               std::span<const SweepSetting> settings);

// Five runs (full, rest1..rest4) sharing the seed; writes ablate.csv and a
// per-mode config echo.
void run_ablate(const RunConfig& cfg, const std::string& out_dir);

// Pretty-prints the artifact files found under `dir`.
void run_report(const std::string& dir, std::ostream& out);

}  // namespace rest
