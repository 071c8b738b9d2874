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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rest/errors.hpp"
#include "rest/fmt.hpp"
#include "rest/runner.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 I/O error, 4 numeric failure.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

rest::RunConfig resolve_config(const std::string& config_path,
                               const std::optional<std::uint64_t>& seed) {
  rest::RunConfig cfg;
  if (!config_path.empty()) cfg = rest::load_run_config(config_path);
  if (seed) {
    cfg.synth.seed = *seed;
    cfg.train.seed = *seed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatially-constrained representation enhancement for "
               "local-life recommendation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool cold_start = false;
  std::string axis;
  std::string report_dir;

  auto add_common = [&](CLI::App* cmd, const std::string& default_out) {
    cmd->add_option("--config", config_path, "config file (key=value sections)");
    cmd->add_option("--seed", seed, "override synth/train seeds");
    cmd->add_option("--out", out_dir, "run directory")->default_val(default_out);
  };

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  add_common(gen, "runs/gen");
  auto* tr = app.add_subcommand("train", "train on the configured dataset");
  add_common(tr, "runs/train");
  auto* ev = app.add_subcommand("evaluate", "score a snapshot on the dataset");
  add_common(ev, "runs/evaluate");
  ev->add_flag("--cold-start", cold_start,
               "also evaluate the cold-start split");
  auto* sw = app.add_subcommand("sweep", "hyperparameter sweep");
  add_common(sw, "runs/sweep");
  sw->add_option("--axis", axis, "radii | k_negatives | clusters | alpha2")
      ->required();
  auto* ab = app.add_subcommand("ablate", "run full + rest1..rest4 variants");
  add_common(ab, "runs/ablate");
  auto* rp = app.add_subcommand("report", "print the artifacts of a run");
  rp->add_option("--out", report_dir, "run directory to summarize")
      ->default_val("runs/train");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = resolve_config(config_path, seed);
      const auto s = rest::run_generate(cfg, out_dir);
      std::cout << "wrote " << out_dir << "/interactions.csv (" << s.records
                << " records, " << s.requests << " requests) and " << out_dir
                << "/catalog.csv (" << s.items << " items)\n"
                << "users=" << s.users
                << " positive_rate=" << rest::fmt_double(s.positive_rate)
                << std::endl;
    } else if (tr->parsed()) {
      const auto cfg = resolve_config(config_path, seed);
      const auto outcome = rest::run_train(cfg, out_dir);
      std::cout << "mode=" << outcome.report.mode_label;
      if (!outcome.report.epochs.empty()) {
        std::cout << " final_ce="
                  << rest::fmt_double(outcome.report.epochs.back().mean_ce);
      }
      std::cout << " eval_auc=" << rest::fmt_double(outcome.eval_metrics.auc)
                << "\nartifacts under " << out_dir << std::endl;
    } else if (ev->parsed()) {
      const auto cfg = resolve_config(config_path, seed);
      const auto outcome = rest::run_evaluate(cfg, out_dir, cold_start);
      std::cout << "auc=" << rest::fmt_double(outcome.full.auc)
                << " mrr=" << rest::fmt_double(outcome.full.mrr)
                << " ndcg5=" << rest::fmt_double(outcome.full.ndcg5)
                << " ndcg10=" << rest::fmt_double(outcome.full.ndcg10);
      if (outcome.cold) {
        std::cout << " cold_records=" << outcome.cold->records << " cold_auc="
                  << rest::fmt_double(outcome.cold->auc);
      }
      std::cout << "\nartifacts under " << out_dir << std::endl;
    } else if (sw->parsed()) {
      const auto cfg = resolve_config(config_path, seed);
      rest::run_sweep(cfg, axis, out_dir);
      std::cout << "wrote " << out_dir << "/sweep_" << axis << ".csv"
                << std::endl;
    } else if (ab->parsed()) {
      const auto cfg = resolve_config(config_path, seed);
      rest::run_ablate(cfg, out_dir);
      std::cout << "wrote " << out_dir << "/ablate.csv" << std::endl;
    } else if (rp->parsed()) {
      rest::run_report(report_dir, std::cout);
    }
  } catch (const rest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const rest::ContractError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const rest::ParseError& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const rest::IoError& e) {
    std::cerr << "i/o error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const rest::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << std::endl;
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
