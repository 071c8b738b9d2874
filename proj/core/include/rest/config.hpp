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

#include <istream>
#include <string>

#include "rest/alignment.hpp"
#include "rest/model.hpp"
#include "rest/sampling.hpp"
#include "rest/synth.hpp"
#include "rest/trainer.hpp"

namespace rest {

struct PathsConfig {
  std::string log = "runs/gen/interactions.csv";
  std::string catalog = "runs/gen/catalog.csv";
  std::string snapshot = "runs/train/snapshot";
};

struct DataConfig {
  double eval_ratio = 0.25;  // held-out fraction of request groups
  std::uint64_t split_seed = 13;
  std::uint32_t cold_start_threshold = 3;
  // evaluate on the held-out split (true) or on the whole file (false)
  bool eval_split = true;

  void validate() const;
};

// Everything a run needs, merged. Every key has a default, so an empty (or
// absent) config file is a valid run.
struct RunConfig {
  SynthConfig synth;
  ModelConfig model;
  TrainConfig train;
  SamplingConfig sampling;
  AlignmentConfig alignment;
  DataConfig data;
  PathsConfig paths;

  void validate() const;
};

// Plain-text key=value format with [section] headers and # comments.
// Unknown sections or keys are errors.
RunConfig parse_run_config(std::istream& in, const std::string& source_name);
RunConfig load_run_config(const std::string& path);

// Fully-resolved echo; parsing it back reproduces the config exactly.
std::string render_run_config(const RunConfig& cfg);

}  // namespace rest
