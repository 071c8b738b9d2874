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

#include "rest/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "rest/errors.hpp"
#include "rest/fmt.hpp"
#include "rest/snapshot.hpp"

namespace fs = std::filesystem;

namespace rest {

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

void echo_config(const RunConfig& cfg, const std::string& out_dir,
                 const std::string& name = "config.resolved") {
  write_file(out_dir + "/" + name, render_run_config(cfg));
}

std::string metrics_kv(const MetricsReport& m, const std::string& prefix) {
  std::ostringstream o;
  o << prefix << "records=" << m.records << '\n';
  o << prefix << "groups=" << m.groups << '\n';
  o << prefix << "groups_without_positive=" << m.groups_without_positive << '\n';
  o << prefix << "positive_rate=" << fmt_double(m.positive_rate) << '\n';
  o << prefix << "auc=" << fmt_double(m.auc) << '\n';
  o << prefix << "mrr=" << fmt_double(m.mrr) << '\n';
  o << prefix << "ndcg5=" << fmt_double(m.ndcg5) << '\n';
  o << prefix << "ndcg10=" << fmt_double(m.ndcg10) << '\n';
  return o.str();
}

constexpr const char* kMetricsCsvHeader =
    "records,groups,positive_rate,auc,mrr,ndcg5,ndcg10";

std::string metrics_csv_row(const MetricsReport& m) {
  std::ostringstream o;
  o << m.records << ',' << m.groups << ',' << fmt_double(m.positive_rate) << ','
    << fmt_double(m.auc) << ',' << fmt_double(m.mrr) << ','
    << fmt_double(m.ndcg5) << ',' << fmt_double(m.ndcg10);
  return o.str();
}

bool snapshot_use_warm(const TrainConfig& t) {
  return !t.disable_sidenet && t.mode != AblationMode::kNoWarmup;
}

struct LoadedSplits {
  Dataset full;
  Dataset train;
  Dataset eval;
};

LoadedSplits load_splits(const RunConfig& cfg) {
  LoadedSplits out;
  out.full = load_dataset(cfg.paths.log, cfg.paths.catalog);
  auto [train_ds, eval_ds] = train_eval_split(
      out.full, 1.0 - cfg.data.eval_ratio, cfg.data.split_seed);
  out.train = std::move(train_ds);
  out.eval = std::move(eval_ds);
  return out;
}

}  // namespace

GenerateSummary run_generate(const RunConfig& cfg, const std::string& out_dir) {
  cfg.synth.validate();
  ensure_dir(out_dir);
  const Dataset ds = synth_generate(cfg.synth);
  save_catalog(ds.catalog, out_dir + "/catalog.csv");
  save_log(ds, out_dir + "/interactions.csv");
  echo_config(cfg, out_dir);

  GenerateSummary s;
  s.records = ds.records.size();
  s.items = ds.catalog.n_items();
  s.users = ds.n_users();
  std::set<std::uint32_t> requests;
  std::size_t positives = 0;
  for (const auto& r : ds.records) {
    requests.insert(r.request_id);
    positives += static_cast<std::size_t>(r.label);
  }
  s.requests = requests.size();
  s.positive_rate = ds.records.empty()
                        ? 0.0
                        : static_cast<double>(positives) /
                              static_cast<double>(ds.records.size());
  return s;
}

TrainOutcome run_train(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto splits = load_splits(cfg);

  TrainResult result = train(splits.train, cfg.model, cfg.train, cfg.sampling,
                             cfg.alignment, splits.full.n_users());

  const bool use_warm = snapshot_use_warm(cfg.train);
  SnapshotMeta meta;
  meta.embedding_dim = cfg.model.embedding_dim;
  meta.attention_softmax = cfg.model.attention_softmax;
  meta.mode_token = ablation_mode_token(cfg.train.mode);
  meta.use_warm = use_warm;
  save_snapshot(out_dir + "/snapshot", result.params, result.clusters, meta);

  const MetricsReport em = evaluate_model(result.params, result.clusters,
                                          use_warm, cfg.alignment.epsilon,
                                          splits.eval);

  std::ostringstream txt;
  txt << "mode=" << result.report.mode_label << '\n';
  txt << "epochs=" << result.report.epochs.size() << '\n';
  txt << "train_records=" << splits.train.records.size() << '\n';
  for (const auto& e : result.report.epochs) {
    txt << "epoch=" << e.epoch << " ce=" << fmt_double(e.mean_ce)
        << " cl=" << fmt_double(e.mean_cl)
        << " mean_alpha=" << fmt_double(e.mean_alpha)
        << " pairs_built=" << e.pairs_built
        << " dropped_no_positive=" << e.dropped_no_positive
        << " dropped_no_negative=" << e.dropped_no_negative
        << " lr=" << fmt_double(e.lr) << '\n';
  }
  txt << metrics_kv(em, "eval_");
  write_file(out_dir + "/train_report.txt", txt.str());

  std::ostringstream csv;
  csv << "epoch,ce,cl,mean_alpha,pairs_built,dropped_no_positive,"
         "dropped_no_negative,lr\n";
  for (const auto& e : result.report.epochs) {
    csv << e.epoch << ',' << fmt_double(e.mean_ce) << ','
        << fmt_double(e.mean_cl) << ',' << fmt_double(e.mean_alpha) << ','
        << e.pairs_built << ',' << e.dropped_no_positive << ','
        << e.dropped_no_negative << ',' << fmt_double(e.lr) << '\n';
  }
  write_file(out_dir + "/train_report.csv", csv.str());

  std::ostringstream steps;
  steps << "step,ce,cl\n";
  for (std::size_t i = 0; i < result.report.step_ce.size(); ++i) {
    steps << i << ',' << fmt_double(result.report.step_ce[i]) << ','
          << fmt_double(result.report.step_cl[i]) << '\n';
  }
  write_file(out_dir + "/steps.csv", steps.str());

  echo_config(cfg, out_dir);
  return TrainOutcome{std::move(result.report), em};
}

EvaluateOutcome run_evaluate(const RunConfig& cfg, const std::string& out_dir,
                             bool cold_start) {
  cfg.validate();
  ensure_dir(out_dir);
  Snapshot snap = load_snapshot(cfg.paths.snapshot);
  const auto splits = load_splits(cfg);
  const Dataset& target = cfg.data.eval_split ? splits.eval : splits.full;

  EvaluateOutcome out;
  out.full = evaluate_model(snap.params, snap.clusters, snap.meta.use_warm,
                            cfg.alignment.epsilon, target);
  write_file(out_dir + "/metrics.txt", metrics_kv(out.full, ""));
  write_file(out_dir + "/metrics.csv", std::string(kMetricsCsvHeader) + "\n" +
                                           metrics_csv_row(out.full) + "\n");

  if (cold_start) {
    const auto freq = item_frequency(splits.full);
    const Dataset cold =
        cold_start_filter(target, freq, cfg.data.cold_start_threshold);
    MetricsReport cm = evaluate_model(snap.params, snap.clusters,
                                      snap.meta.use_warm,
                                      cfg.alignment.epsilon, cold);
    std::ostringstream txt;
    txt << "cold_start_threshold=" << cfg.data.cold_start_threshold << '\n';
    if (cold.records.empty()) {
      txt << "notice=cold-start split is empty (no items below the "
             "threshold)\n";
    }
    txt << metrics_kv(cm, "");
    write_file(out_dir + "/metrics_coldstart.txt", txt.str());
    write_file(out_dir + "/metrics_coldstart.csv",
               std::string(kMetricsCsvHeader) + "\n" + metrics_csv_row(cm) +
                   "\n");
    out.cold = cm;
  }
  echo_config(cfg, out_dir);
  return out;
}

std::vector<SweepSetting> sweep_grid(const std::string& axis) {
  std::vector<SweepSetting> grid;
  if (axis == "radii") {
    const double r[] = {5.0, 10.0, 30.0};
    for (double pos : r) {
      for (double neg : r) {
        grid.push_back({{{"pos_radius_km", pos}, {"neg_radius_km", neg}}});
      }
    }
    const double inf = std::numeric_limits<double>::infinity();
    grid.push_back({{{"pos_radius_km", inf}, {"neg_radius_km", inf}}});
  } else if (axis == "k_negatives") {
    for (double k : {3.0, 6.0, 9.0, 12.0, 15.0}) {
      grid.push_back({{{"k_negatives", k}}});
    }
  } else if (axis == "clusters") {
    for (double c : {5.0, 25.0, 50.0, 75.0, 100.0}) {
      grid.push_back({{{"clusters", c}}});
    }
  } else if (axis == "alpha2") {
    for (double a : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      grid.push_back({{{"alpha2", a}}});
    }
  } else {
    throw ConfigError("sweep: unknown axis '" + axis +
                      "' (expected radii, k_negatives, clusters or alpha2)");
  }
  return grid;
}

RunConfig apply_sweep_setting(const RunConfig& base, const SweepSetting& s) {
  RunConfig cfg = base;
  for (const auto& [key, value] : s.values) {
    if (key == "pos_radius_km") cfg.sampling.pos_radius_km = value;
    else if (key == "neg_radius_km") cfg.sampling.neg_radius_km = value;
    else if (key == "k_negatives") cfg.sampling.k_negatives = static_cast<std::uint32_t>(value);
    else if (key == "clusters") cfg.alignment.n_clusters = static_cast<std::uint32_t>(value);
    else if (key == "alpha2") cfg.train.alpha2 = value;
    else throw ConfigError("sweep: unknown setting key '" + key + "'");
  }
  return cfg;
}

void run_sweep(const RunConfig& cfg, const std::string& axis,
               const std::string& out_dir,
               std::span<const SweepSetting> settings) {
  cfg.validate();
  if (settings.empty()) throw ConfigError("sweep: empty grid");
  ensure_dir(out_dir);
  const auto splits = load_splits(cfg);

  std::ostringstream csv;
  for (const auto& [key, value] : settings.front().values) {
    (void)value;
    csv << key << ',';
  }
  csv << kMetricsCsvHeader << '\n';

  for (const auto& setting : settings) {
    const RunConfig rc = apply_sweep_setting(cfg, setting);
    rc.validate();
    TrainResult result = train(splits.train, rc.model, rc.train, rc.sampling,
                               rc.alignment, splits.full.n_users());
    const MetricsReport m =
        evaluate_model(result.params, result.clusters,
                       snapshot_use_warm(rc.train), rc.alignment.epsilon,
                       splits.eval);
    std::ostringstream label;
    for (const auto& [key, value] : setting.values) {
      csv << fmt_double(value) << ',';
      label << ' ' << key << '=' << fmt_double(value);
    }
    csv << metrics_csv_row(m) << '\n';
    std::cout << "sweep " << axis << label.str() << " auc=" << fmt_double(m.auc)
              << std::endl;
  }
  write_file(out_dir + "/sweep_" + axis + ".csv", csv.str());
  echo_config(cfg, out_dir);
}

void run_sweep(const RunConfig& cfg, const std::string& axis,
               const std::string& out_dir) {
  const auto grid = sweep_grid(axis);
  run_sweep(cfg, axis, out_dir, grid);
}

void run_ablate(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto splits = load_splits(cfg);
  const auto freq = item_frequency(splits.full);

  const AblationMode modes[] = {
      AblationMode::kFull, AblationMode::kRandomNeg, AblationMode::kCategoryOnly,
      AblationMode::kBrandOnly, AblationMode::kNoWarmup};

  std::ostringstream csv;
  csv << "mode," << kMetricsCsvHeader << ",cold_records,cold_auc\n";
  for (AblationMode mode : modes) {
    RunConfig rc = cfg;
    rc.train.mode = mode;
    const std::string token = ablation_mode_token(mode);
    echo_config(rc, out_dir, "config_" + token + ".resolved");

    TrainResult result = train(splits.train, rc.model, rc.train, rc.sampling,
                               rc.alignment, splits.full.n_users());
    const bool warm = snapshot_use_warm(rc.train);
    const MetricsReport m = evaluate_model(result.params, result.clusters, warm,
                                           rc.alignment.epsilon, splits.eval);
    const Dataset cold =
        cold_start_filter(splits.eval, freq, cfg.data.cold_start_threshold);
    const MetricsReport cm = evaluate_model(result.params, result.clusters,
                                            warm, rc.alignment.epsilon, cold);
    csv << token << ',' << metrics_csv_row(m) << ',' << cm.records << ','
        << fmt_double(cm.auc) << '\n';
    std::cout << "ablate " << token << " auc=" << fmt_double(m.auc)
              << " cold_auc=" << fmt_double(cm.auc) << std::endl;
  }
  write_file(out_dir + "/ablate.csv", csv.str());
  echo_config(cfg, out_dir);
}

void run_report(const std::string& dir, std::ostream& out) {
  if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  bool any = false;
  for (const auto& name : names) {
    const bool printable = name == "config.resolved" ||
                           name == "train_report.txt" ||
                           name == "train_report.csv" || name == "metrics.txt" ||
                           name == "metrics.csv" ||
                           name == "metrics_coldstart.txt" ||
                           name == "metrics_coldstart.csv" ||
                           name == "ablate.csv" ||
                           name.starts_with("sweep_") ||
                           name.starts_with("config_");
    if (!printable) continue;
    std::ifstream in(dir + "/" + name);
    if (!in) continue;
    out << "== " << name << " ==\n";
    out << in.rdbuf();
    out << '\n';
    any = true;
  }
  if (!any) out << "no report artifacts found under " << dir << '\n';
}

}  // namespace rest
