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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <doctest.h>

#include "rest/data.hpp"
#include "rest/errors.hpp"
#include "rest/rng.hpp"
#include "rest/synth.hpp"

using namespace rest;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("rest_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ItemCatalog tiny_catalog() {
  ItemCatalog c;
  c.brand_of = {0, 1, 0};
  c.category_of = {0, 0, 1};
  c.location_of = {GeoPoint(10, 10), GeoPoint(10.01, 10.0), GeoPoint(40, 40)};
  c.n_brands = 2;
  c.n_categories = 2;
  return c;
}

SynthConfig small_synth(std::uint64_t seed = 5) {
  SynthConfig cfg;
  cfg.n_users = 50;
  cfg.n_items = 200;
  cfg.n_brands = 30;
  cfg.n_categories = 8;
  cfg.n_records = 2000;
  cfg.n_cities = 4;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("hand-written fixture loads with exact field values") {
  const auto dir = temp_dir("fixture");
  {
    std::ofstream cat(dir / "catalog.csv");
    cat << "item_id,brand_id,category_id,lat,lon\n";
    cat << "0,0,0,10,10\n";
    cat << "1,1,0,10.01,10\n";
    cat << "2,0,1,40,40\n";
  }
  {
    std::ofstream log(dir / "log.csv");
    log << "user_id,request_id,item_id,brand_id,category_id,lat,lon,label,history\n";
    log << "3,100,0,0,0,10.002,10.001,1,1|2\n";
    log << "3,100,1,1,0,10.002,10.001,0,1|2\n";
    log << "4,101,2,0,1,39.9,40.1,1,\n";
  }
  const Dataset ds = load_dataset((dir / "log.csv").string(),
                                  (dir / "catalog.csv").string());
  REQUIRE(ds.records.size() == 3);
  CHECK(ds.catalog.n_items() == 3);
  CHECK(ds.catalog.n_brands == 2);
  CHECK(ds.catalog.n_categories == 2);
  CHECK(ds.records[0].user_id == 3);
  CHECK(ds.records[0].request_id == 100);
  CHECK(ds.records[0].item_id == 0);
  CHECK(ds.records[0].label == 1);
  CHECK(ds.records[0].user_location.lat == 10.002);
  CHECK(ds.records[0].history == std::vector<std::uint32_t>{1, 2});
  CHECK(ds.records[2].history.empty());  // empty history column -> |H| = 0
  CHECK(ds.n_users() == 5);
}

TEST_CASE("write(load(f)) reproduces the file byte for byte") {
  const auto dir = temp_dir("roundtrip");
  const Dataset ds = synth_generate(small_synth());
  save_catalog(ds.catalog, (dir / "catalog.csv").string());
  save_log(ds, (dir / "a.csv").string());
  const Dataset loaded = load_dataset((dir / "a.csv").string(),
                                      (dir / "catalog.csv").string());
  save_log(loaded, (dir / "b.csv").string());
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  save_catalog(loaded.catalog, (dir / "catalog_b.csv").string());
  CHECK(slurp(dir / "catalog.csv") == slurp(dir / "catalog_b.csv"));
}

TEST_CASE("malformed rows are rejected with line numbers") {
  const auto dir = temp_dir("badrows");
  {
    std::ofstream cat(dir / "catalog.csv");
    cat << "item_id,brand_id,category_id,lat,lon\n0,0,0,10,10\n";
  }
  const ItemCatalog catalog = load_catalog((dir / "catalog.csv").string());

  auto write_log_text = [&](const std::string& body) {
    std::ofstream log(dir / "log.csv");
    log << "user_id,request_id,item_id,brand_id,category_id,lat,lon,label,history\n"
        << body;
  };

  write_log_text("1,1,0,0,0,10,10,2,\n");  // label out of range
  CHECK_THROWS_WITH_AS(load_log((dir / "log.csv").string(), catalog),
                       doctest::Contains("line 2"), ParseError);

  write_log_text("1,1,0,0,0,ten,10,1,\n");
  CHECK_THROWS_WITH_AS(load_log((dir / "log.csv").string(), catalog),
                       doctest::Contains("lat"), ParseError);

  write_log_text("1,1,9,0,0,10,10,1,\n");  // unresolved item id
  CHECK_THROWS_WITH_AS(load_log((dir / "log.csv").string(), catalog),
                       doctest::Contains("9"), IndexError);

  write_log_text("1,1,0,1,0,10,10,1,\n");  // brand disagrees with catalog
  CHECK_THROWS_AS(load_log((dir / "log.csv").string(), catalog), ParseError);

  CHECK_THROWS_AS(load_catalog((dir / "missing.csv").string()), IoError);
}

TEST_CASE("spatial_candidate_filter edge cases and brute force") {
  const ItemCatalog catalog = tiny_catalog();
  const GeoPoint away(-50, -100);
  CHECK(spatial_candidate_filter(away, catalog, 0.0).empty());

  const auto all = spatial_candidate_filter(
      away, catalog, std::numeric_limits<double>::infinity());
  CHECK(all == std::vector<std::uint32_t>{0, 1, 2});

  const Dataset ds = synth_generate(small_synth());
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const GeoPoint u(rng.uniform(25, 45), rng.uniform(100, 124));
    const double d = rng.uniform(0.0, 50.0);
    const auto got = spatial_candidate_filter(u, ds.catalog, d);
    std::vector<std::uint32_t> want;
    for (std::size_t it = 0; it < ds.catalog.n_items(); ++it) {
      if (haversine_km(u, ds.catalog.location_of[it]) <= d)
        want.push_back(static_cast<std::uint32_t>(it));
    }
    CHECK(got == want);
  }
}

TEST_CASE("cold_start_split follows corpus frequency") {
  Dataset ds;
  ds.catalog = tiny_catalog();
  auto add = [&](std::uint32_t item, int times) {
    for (int i = 0; i < times; ++i) {
      InteractionRecord r;
      r.item_id = item;
      r.request_id = static_cast<std::uint32_t>(ds.records.size());
      r.user_location = GeoPoint(10, 10);
      ds.records.push_back(r);
    }
  };
  add(0, 5);  // item a
  add(1, 2);  // item b
  add(2, 1);  // item c

  const Dataset cold = cold_start_split(ds, 3);
  CHECK(cold.records.size() == 3);
  for (const auto& r : cold.records) CHECK(r.item_id != 0);

  CHECK(cold_start_split(ds, 1).records.empty());

  // brute-force oracle on generated data
  const Dataset gen = synth_generate(small_synth());
  const Dataset split = cold_start_split(gen, 3);
  std::map<std::uint32_t, std::size_t> freq;
  for (const auto& r : gen.records) ++freq[r.item_id];
  std::size_t want = 0;
  for (const auto& r : gen.records)
    if (freq[r.item_id] < 3) ++want;
  CHECK(split.records.size() == want);
}

TEST_CASE("train_eval_split is group-disjoint and deterministic") {
  Dataset ds;
  ds.catalog = tiny_catalog();
  for (std::uint32_t g = 0; g < 10; ++g) {
    for (int k = 0; k < 3; ++k) {
      InteractionRecord r;
      r.request_id = g;
      r.item_id = g % 3;
      r.user_id = g;
      r.user_location = GeoPoint(10, 10);
      ds.records.push_back(r);
    }
  }
  const auto [train, eval] = train_eval_split(ds, 0.8, 42);
  std::set<std::uint32_t> tg, eg;
  for (const auto& r : train.records) tg.insert(r.request_id);
  for (const auto& r : eval.records) eg.insert(r.request_id);
  CHECK(tg.size() == 8);
  CHECK(eg.size() == 2);
  for (std::uint32_t g : tg) CHECK(eg.count(g) == 0);
  CHECK(train.records.size() + eval.records.size() == ds.records.size());

  const auto [train2, eval2] = train_eval_split(ds, 0.8, 42);
  REQUIRE(train2.records.size() == train.records.size());
  for (std::size_t i = 0; i < train.records.size(); ++i) {
    CHECK(train2.records[i].request_id == train.records[i].request_id);
  }

  CHECK_THROWS_AS(train_eval_split(ds, 0.0, 1), ContractError);
  CHECK_THROWS_AS(train_eval_split(ds, 1.0, 1), ContractError);
}

}  // TEST_SUITE

TEST_SUITE("synth") {

TEST_CASE("same seed gives byte-identical datasets") {
  const auto dir = temp_dir("synth_det");
  const Dataset a = synth_generate(small_synth(9));
  const Dataset b = synth_generate(small_synth(9));
  save_log(a, (dir / "a.csv").string());
  save_log(b, (dir / "b.csv").string());
  save_catalog(a.catalog, (dir / "ca.csv").string());
  save_catalog(b.catalog, (dir / "cb.csv").string());
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "ca.csv") == slurp(dir / "cb.csv"));

  const Dataset c = synth_generate(small_synth(10));
  save_log(c, (dir / "c.csv").string());
  CHECK(slurp(dir / "a.csv") != slurp(dir / "c.csv"));
}

TEST_CASE("every candidate lies within the radius, exhaustively") {
  const SynthConfig cfg = small_synth();
  const Dataset ds = synth_generate(cfg);
  REQUIRE(!ds.records.empty());
  for (const auto& r : ds.records) {
    CHECK(within_radius(r.user_location, ds.catalog.location_of[r.item_id],
                        cfg.candidate_radius_km));
  }
}

TEST_CASE("referential integrity of generated data") {
  const Dataset ds = synth_generate(small_synth());
  for (const auto& r : ds.records) {
    CHECK(r.item_id < ds.catalog.n_items());
    for (std::uint32_t h : r.history) CHECK(h < ds.catalog.n_items());
    CHECK((r.label == 0 || r.label == 1));
  }
  for (std::size_t i = 0; i < ds.catalog.n_items(); ++i) {
    CHECK(ds.catalog.brand_of[i] < ds.catalog.n_brands);
    CHECK(ds.catalog.category_of[i] < ds.catalog.n_categories);
  }
}

TEST_CASE("zipf head concentration: top 1% of items take >= 15% of traffic") {
  SynthConfig cfg = small_synth(3);
  cfg.n_items = 1000;
  cfg.n_records = 20000;
  cfg.zipf_exponent = 1.0;
  const Dataset ds = synth_generate(cfg);
  std::vector<std::size_t> freq = item_frequency(ds);
  std::sort(freq.begin(), freq.end(), std::greater<>());
  std::size_t head = 0, total = 0;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    if (i < freq.size() / 100) head += freq[i];
    total += freq[i];
  }
  CHECK(static_cast<double>(head) >= 0.15 * static_cast<double>(total));
}

TEST_CASE("long-tail invariant: Gini above 0.5 at default config") {
  const Dataset ds = synth_generate(SynthConfig{});
  auto freq = item_frequency(ds);
  std::sort(freq.begin(), freq.end());
  const double n = static_cast<double>(freq.size());
  double cum = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    weighted += static_cast<double>(i + 1) * static_cast<double>(freq[i]);
    cum += static_cast<double>(freq[i]);
  }
  const double gini = (2.0 * weighted) / (n * cum) - (n + 1.0) / n;
  CHECK(gini > 0.5);
}

TEST_CASE("config validation") {
  SynthConfig cfg = small_synth();
  cfg.n_items = 0;
  CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
  cfg = small_synth();
  cfg.chain_fraction = 1.5;
  CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
  cfg = small_synth();
  cfg.label_noise = -0.1;
  CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
}

}  // TEST_SUITE
