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

#include "rest/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rest/errors.hpp"
#include "rest/fmt.hpp"

namespace rest {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& where) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(where + ": expected number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& where) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(where + ": expected unsigned integer, got '" + v + "'");
  }
  return out;
}

std::uint32_t to_u32(const std::string& v, const std::string& where) {
  const std::uint64_t x = to_u64(v, where);
  if (x > UINT32_MAX) throw ConfigError(where + ": value too large");
  return static_cast<std::uint32_t>(x);
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(where + ": expected true/false, got '" + v + "'");
}

}  // namespace

void DataConfig::validate() const {
  if (!(eval_ratio > 0.0 && eval_ratio < 1.0)) {
    throw ConfigError("data: eval_ratio outside (0, 1)");
  }
  if (cold_start_threshold < 1) {
    throw ConfigError("data: cold_start_threshold must be >= 1");
  }
}

void RunConfig::validate() const {
  synth.validate();
  model.validate();
  train.validate();
  sampling.validate();
  alignment.validate();
  data.validate();
}

RunConfig parse_run_config(std::istream& in, const std::string& source_name) {
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where =
        source_name + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section '" + t + "'");
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key=value, got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    const std::string kq = where + " [" + section + "] " + key;

    if (section == "synth") {
      if (key == "n_cities") cfg.synth.n_cities = to_u32(val, kq);
      else if (key == "city_radius_km") cfg.synth.city_radius_km = to_double(val, kq);
      else if (key == "n_users") cfg.synth.n_users = to_u32(val, kq);
      else if (key == "n_items") cfg.synth.n_items = to_u32(val, kq);
      else if (key == "n_brands") cfg.synth.n_brands = to_u32(val, kq);
      else if (key == "n_categories") cfg.synth.n_categories = to_u32(val, kq);
      else if (key == "chain_fraction") cfg.synth.chain_fraction = to_double(val, kq);
      else if (key == "zipf_exponent") cfg.synth.zipf_exponent = to_double(val, kq);
      else if (key == "candidate_radius_km") cfg.synth.candidate_radius_km = to_double(val, kq);
      else if (key == "history_length_max") cfg.synth.history_length_max = to_u32(val, kq);
      else if (key == "label_noise") cfg.synth.label_noise = to_double(val, kq);
      else if (key == "n_records") cfg.synth.n_records = to_u32(val, kq);
      else if (key == "candidates_per_request") cfg.synth.candidates_per_request = to_u32(val, kq);
      else if (key == "seed") cfg.synth.seed = to_u64(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "model") {
      if (key == "embedding_dim") cfg.model.embedding_dim = to_u32(val, kq);
      else if (key == "attention_softmax") cfg.model.attention_softmax = to_bool(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "train") {
      if (key == "batch_size") cfg.train.batch_size = to_u32(val, kq);
      else if (key == "learning_rate") cfg.train.learning_rate = to_double(val, kq);
      else if (key == "lr_decay_factor") cfg.train.lr_decay_factor = to_double(val, kq);
      else if (key == "lr_decay_period") cfg.train.lr_decay_period = to_u32(val, kq);
      else if (key == "beta1") cfg.train.beta1 = to_double(val, kq);
      else if (key == "beta2") cfg.train.beta2 = to_double(val, kq);
      else if (key == "weight_decay") cfg.train.weight_decay = to_double(val, kq);
      else if (key == "temperature") cfg.train.temperature = to_double(val, kq);
      else if (key == "alpha2") cfg.train.alpha2 = to_double(val, kq);
      else if (key == "epochs") cfg.train.epochs = to_u32(val, kq);
      else if (key == "seed") cfg.train.seed = to_u64(val, kq);
      else if (key == "mode") cfg.train.mode = parse_ablation_mode(val);
      else if (key == "contrastive_on_warm") cfg.train.contrastive_on_warm = to_bool(val, kq);
      else if (key == "disable_sidenet") cfg.train.disable_sidenet = to_bool(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "sampling") {
      if (key == "pos_radius_km") cfg.sampling.pos_radius_km = to_double(val, kq);
      else if (key == "neg_radius_km") cfg.sampling.neg_radius_km = to_double(val, kq);
      else if (key == "k_negatives") cfg.sampling.k_negatives = to_u32(val, kq);
      else if (key == "cosine") cfg.sampling.cosine = to_bool(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "alignment") {
      if (key == "clusters") cfg.alignment.n_clusters = to_u32(val, kq);
      else if (key == "epsilon") cfg.alignment.epsilon = to_double(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "data") {
      if (key == "eval_ratio") cfg.data.eval_ratio = to_double(val, kq);
      else if (key == "split_seed") cfg.data.split_seed = to_u64(val, kq);
      else if (key == "cold_start_threshold") cfg.data.cold_start_threshold = to_u32(val, kq);
      else if (key == "eval_split") cfg.data.eval_split = to_bool(val, kq);
      else throw ConfigError(kq + ": unknown key");
    } else if (section == "paths") {
      if (key == "log") cfg.paths.log = val;
      else if (key == "catalog") cfg.paths.catalog = val;
      else if (key == "snapshot") cfg.paths.snapshot = val;
      else throw ConfigError(kq + ": unknown key");
    } else if (section.empty()) {
      throw ConfigError(where + ": key '" + key + "' outside any [section]");
    } else {
      throw ConfigError(where + ": unknown section [" + section + "]");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_run_config(in, path);
}

std::string render_run_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[synth]\n";
  o << "n_cities=" << cfg.synth.n_cities << '\n';
  o << "city_radius_km=" << fmt_double(cfg.synth.city_radius_km) << '\n';
  o << "n_users=" << cfg.synth.n_users << '\n';
  o << "n_items=" << cfg.synth.n_items << '\n';
  o << "n_brands=" << cfg.synth.n_brands << '\n';
  o << "n_categories=" << cfg.synth.n_categories << '\n';
  o << "chain_fraction=" << fmt_double(cfg.synth.chain_fraction) << '\n';
  o << "zipf_exponent=" << fmt_double(cfg.synth.zipf_exponent) << '\n';
  o << "candidate_radius_km=" << fmt_double(cfg.synth.candidate_radius_km) << '\n';
  o << "history_length_max=" << cfg.synth.history_length_max << '\n';
  o << "label_noise=" << fmt_double(cfg.synth.label_noise) << '\n';
  o << "n_records=" << cfg.synth.n_records << '\n';
  o << "candidates_per_request=" << cfg.synth.candidates_per_request << '\n';
  o << "seed=" << cfg.synth.seed << '\n';
  o << "\n[model]\n";
  o << "embedding_dim=" << cfg.model.embedding_dim << '\n';
  o << "attention_softmax=" << (cfg.model.attention_softmax ? "true" : "false") << '\n';
  o << "\n[train]\n";
  o << "batch_size=" << cfg.train.batch_size << '\n';
  o << "learning_rate=" << fmt_double(cfg.train.learning_rate) << '\n';
  o << "lr_decay_factor=" << fmt_double(cfg.train.lr_decay_factor) << '\n';
  o << "lr_decay_period=" << cfg.train.lr_decay_period << '\n';
  o << "beta1=" << fmt_double(cfg.train.beta1) << '\n';
  o << "beta2=" << fmt_double(cfg.train.beta2) << '\n';
  o << "weight_decay=" << fmt_double(cfg.train.weight_decay) << '\n';
  o << "temperature=" << fmt_double(cfg.train.temperature) << '\n';
  o << "alpha2=" << fmt_double(cfg.train.alpha2) << '\n';
  o << "epochs=" << cfg.train.epochs << '\n';
  o << "seed=" << cfg.train.seed << '\n';
  o << "mode=" << ablation_mode_token(cfg.train.mode) << '\n';
  o << "contrastive_on_warm=" << (cfg.train.contrastive_on_warm ? "true" : "false") << '\n';
  o << "disable_sidenet=" << (cfg.train.disable_sidenet ? "true" : "false") << '\n';
  o << "\n[sampling]\n";
  o << "pos_radius_km=" << fmt_double(cfg.sampling.pos_radius_km) << '\n';
  o << "neg_radius_km=" << fmt_double(cfg.sampling.neg_radius_km) << '\n';
  o << "k_negatives=" << cfg.sampling.k_negatives << '\n';
  o << "cosine=" << (cfg.sampling.cosine ? "true" : "false") << '\n';
  o << "\n[alignment]\n";
  o << "clusters=" << cfg.alignment.n_clusters << '\n';
  o << "epsilon=" << fmt_double(cfg.alignment.epsilon) << '\n';
  o << "\n[data]\n";
  o << "eval_ratio=" << fmt_double(cfg.data.eval_ratio) << '\n';
  o << "split_seed=" << cfg.data.split_seed << '\n';
  o << "cold_start_threshold=" << cfg.data.cold_start_threshold << '\n';
  o << "eval_split=" << (cfg.data.eval_split ? "true" : "false") << '\n';
  o << "\n[paths]\n";
  o << "log=" << cfg.paths.log << '\n';
  o << "catalog=" << cfg.paths.catalog << '\n';
  o << "snapshot=" << cfg.paths.snapshot << '\n';
  return o.str();
}

}  // namespace rest
