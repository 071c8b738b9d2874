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

// End-to-end checks that spawn the actual CLI binary (path injected by the
// build as REST_CLI_BIN).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "rest/runner.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(REST_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("rest_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_small_config(const fs::path& path, const fs::path& dir) {
  std::ofstream cfg(path);
  cfg << "[synth]\n"
      << "n_users=40\nn_items=150\nn_brands=25\nn_categories=8\n"
      << "n_records=1200\nn_cities=3\nseed=5\n"
      << "[train]\nepochs=1\nbatch_size=128\nseed=5\n"
      << "[paths]\n"
      << "log=" << (dir / "gen/interactions.csv").string() << "\n"
      << "catalog=" << (dir / "gen/catalog.csv").string() << "\n"
      << "snapshot=" << (dir / "train/snapshot").string() << "\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate writes row-complete files and is reproducible") {
  const auto dir = fresh_dir("gen");
  const auto cfg = dir / "run.cfg";
  write_small_config(cfg, dir);

  REQUIRE(run_cli("generate --config " + cfg.string() + " --out " +
                  (dir / "gen").string()) == 0);
  CHECK(fs::exists(dir / "gen/interactions.csv"));
  CHECK(fs::exists(dir / "gen/catalog.csv"));
  CHECK(fs::exists(dir / "gen/config.resolved"));
  CHECK(line_count(dir / "gen/catalog.csv") == 151);  // header + items

  REQUIRE(run_cli("generate --config " + cfg.string() + " --out " +
                  (dir / "gen2").string()) == 0);
  CHECK(slurp(dir / "gen/interactions.csv") == slurp(dir / "gen2/interactions.csv"));
  CHECK(slurp(dir / "gen/catalog.csv") == slurp(dir / "gen2/catalog.csv"));
}

TEST_CASE("config validation failures exit with code 2") {
  const auto dir = fresh_dir("badcfg");
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "[synth]\nn_items=0\n";
  }
  CHECK(run_cli("generate --config " + (dir / "bad.cfg").string() + " --out " +
                (dir / "out").string()) == 2);
  {
    std::ofstream cfg(dir / "unknown.cfg");
    cfg << "[synth]\nn_itemz=5\n";
  }
  CHECK(run_cli("generate --config " + (dir / "unknown.cfg").string() +
                " --out " + (dir / "out").string()) == 2);
}

TEST_CASE("missing inputs exit with code 3") {
  const auto dir = fresh_dir("missing");
  const auto cfg = dir / "run.cfg";
  write_small_config(cfg, dir);  // paths point at not-yet-generated files
  CHECK(run_cli("train --config " + cfg.string() + " --out " +
                (dir / "train").string()) == 3);
  CHECK(run_cli("generate --config /no/such/file.cfg --out " +
                (dir / "out").string()) == 3);
}

TEST_CASE("generate, train, evaluate, report pipeline") {
  const auto dir = fresh_dir("pipeline");
  const auto cfg = dir / "run.cfg";
  write_small_config(cfg, dir);

  REQUIRE(run_cli("generate --config " + cfg.string() + " --out " +
                  (dir / "gen").string()) == 0);
  REQUIRE(run_cli("train --config " + cfg.string() + " --out " +
                  (dir / "train").string()) == 0);
  CHECK(fs::exists(dir / "train/snapshot.bin"));
  CHECK(fs::exists(dir / "train/snapshot.manifest"));
  CHECK(fs::exists(dir / "train/train_report.txt"));
  CHECK(fs::exists(dir / "train/train_report.csv"));
  CHECK(fs::exists(dir / "train/steps.csv"));

  REQUIRE(run_cli("evaluate --config " + cfg.string() + " --out " +
                  (dir / "eval1").string() + " --cold-start") == 0);
  REQUIRE(run_cli("evaluate --config " + cfg.string() + " --out " +
                  (dir / "eval2").string() + " --cold-start") == 0);
  CHECK(slurp(dir / "eval1/metrics.txt") == slurp(dir / "eval2/metrics.txt"));
  CHECK(slurp(dir / "eval1/metrics.csv") == slurp(dir / "eval2/metrics.csv"));
  CHECK(slurp(dir / "eval1/metrics_coldstart.txt") ==
        slurp(dir / "eval2/metrics_coldstart.txt"));

  CHECK(run_cli("report --out " + (dir / "eval1").string()) == 0);
}

TEST_CASE("a single-point sweep writes exactly one data row") {
  const auto dir = fresh_dir("sweep1");
  const auto cfg_path = dir / "run.cfg";
  write_small_config(cfg_path, dir);
  REQUIRE(run_cli("generate --config " + cfg_path.string() + " --out " +
                  (dir / "gen").string()) == 0);

  rest::RunConfig cfg = rest::load_run_config(cfg_path.string());
  const rest::SweepSetting single{{{"k_negatives", 9.0}}};
  rest::run_sweep(cfg, "k_negatives", (dir / "sweep").string(), {&single, 1});
  CHECK(line_count(dir / "sweep/sweep_k_negatives.csv") == 2);  // header + row
}

}  // TEST_SUITE
