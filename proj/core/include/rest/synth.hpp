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

#include "rest/data.hpp"

namespace rest {

// Synthetic spatial long-tail world: items in Gaussian city clusters, chain
// brands replicated across cities, Zipf popularity, users with latent
// category preferences. Every generated candidate lies within
// candidate_radius_km of its user.
struct SynthConfig {
  std::uint32_t n_cities = 8;
  double city_radius_km = 3.0;
  std::uint32_t n_users = 600;
  std::uint32_t n_items = 6000;
  std::uint32_t n_brands = 300;
  std::uint32_t n_categories = 25;
  double chain_fraction = 0.2;   // brands replicated across cities
  double zipf_exponent = 1.2;
  double candidate_radius_km = 5.0;  // D
  std::uint32_t history_length_max = 20;
  double label_noise = 0.05;
  std::uint32_t n_records = 50400;
  std::uint32_t candidates_per_request = 6;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

// Deterministic under cfg.seed.
Dataset synth_generate(const SynthConfig& cfg);

}  // namespace rest
