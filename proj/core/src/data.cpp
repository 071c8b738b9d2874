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

#include "rest/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rest/errors.hpp"
#include "rest/fmt.hpp"
#include "rest/rng.hpp"

namespace rest {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::uint32_t parse_u32(const std::string& s, std::size_t line_no,
                        const char* column) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + column +
                     ": expected unsigned integer, got '" + s + "'");
  }
  return v;
}

double parse_f64(const std::string& s, std::size_t line_no, const char* column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line_no) + ", column " + column +
                     ": expected number, got '" + s + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

constexpr const char* kCatalogHeader = "item_id,brand_id,category_id,lat,lon";
constexpr const char* kLogHeader =
    "user_id,request_id,item_id,brand_id,category_id,lat,lon,label,history";

}  // namespace

void ItemCatalog::check_item(std::uint32_t item_id) const {
  if (item_id >= n_items()) {
    throw IndexError("item id " + std::to_string(item_id) +
                     " does not resolve in catalog of " +
                     std::to_string(n_items()) + " items");
  }
}

std::uint32_t Dataset::n_users() const {
  std::uint32_t mx = 0;
  bool any = false;
  for (const auto& r : records) {
    mx = std::max(mx, r.user_id);
    any = true;
  }
  return any ? mx + 1 : 0;
}

void save_catalog(const ItemCatalog& catalog, const std::string& path) {
  auto out = open_out(path);
  out << kCatalogHeader << '\n';
  for (std::size_t i = 0; i < catalog.n_items(); ++i) {
    out << i << ',' << catalog.brand_of[i] << ',' << catalog.category_of[i]
        << ',' << fmt_double(catalog.location_of[i].lat) << ','
        << fmt_double(catalog.location_of[i].lon) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

ItemCatalog load_catalog(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kCatalogHeader) {
    throw ParseError(path + ": line 1: expected header '" +
                     std::string(kCatalogHeader) + "'");
  }
  ItemCatalog catalog;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 5) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " +
                       std::to_string(cols.size()) + " columns, expected 5");
    }
    const std::uint32_t item_id = parse_u32(cols[0], line_no, "item_id");
    if (item_id != catalog.n_items()) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": item_id " + cols[0] + " out of order, expected " +
                       std::to_string(catalog.n_items()));
    }
    catalog.brand_of.push_back(parse_u32(cols[1], line_no, "brand_id"));
    catalog.category_of.push_back(parse_u32(cols[2], line_no, "category_id"));
    catalog.location_of.emplace_back(parse_f64(cols[3], line_no, "lat"),
                                     parse_f64(cols[4], line_no, "lon"));
  }
  for (std::uint32_t b : catalog.brand_of)
    catalog.n_brands = std::max(catalog.n_brands, b + 1);
  for (std::uint32_t c : catalog.category_of)
    catalog.n_categories = std::max(catalog.n_categories, c + 1);
  return catalog;
}

void save_log(const Dataset& ds, const std::string& path) {
  auto out = open_out(path);
  out << kLogHeader << '\n';
  for (const auto& r : ds.records) {
    out << r.user_id << ',' << r.request_id << ',' << r.item_id << ','
        << ds.catalog.brand_of[r.item_id] << ','
        << ds.catalog.category_of[r.item_id] << ','
        << fmt_double(r.user_location.lat) << ','
        << fmt_double(r.user_location.lon) << ',' << r.label << ',';
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      if (i) out << '|';
      out << r.history[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

std::vector<InteractionRecord> load_log(const std::string& path,
                                        const ItemCatalog& catalog) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader) {
    throw ParseError(path + ": line 1: expected header '" +
                     std::string(kLogHeader) + "'");
  }
  std::vector<InteractionRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 9) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " +
                       std::to_string(cols.size()) + " columns, expected 9");
    }
    InteractionRecord r;
    r.user_id = parse_u32(cols[0], line_no, "user_id");
    r.request_id = parse_u32(cols[1], line_no, "request_id");
    r.item_id = parse_u32(cols[2], line_no, "item_id");
    catalog.check_item(r.item_id);
    const std::uint32_t brand = parse_u32(cols[3], line_no, "brand_id");
    const std::uint32_t cat = parse_u32(cols[4], line_no, "category_id");
    if (brand != catalog.brand_of[r.item_id] ||
        cat != catalog.category_of[r.item_id]) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": brand/category (" + cols[3] + "," + cols[4] +
                       ") disagree with catalog for item " + cols[2]);
    }
    const double lat = parse_f64(cols[5], line_no, "lat");
    const double lon = parse_f64(cols[6], line_no, "lon");
    try {
      r.user_location = GeoPoint(lat, lon);
    } catch (const ContractError& e) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::uint32_t label = parse_u32(cols[7], line_no, "label");
    if (label > 1) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": label must be 0 or 1, got " + cols[7]);
    }
    r.label = static_cast<int>(label);
    if (!cols[8].empty()) {
      for (const auto& tok : split(cols[8], '|')) {
        const std::uint32_t h = parse_u32(tok, line_no, "history");
        catalog.check_item(h);
        r.history.push_back(h);
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

Dataset load_dataset(const std::string& log_path,
                     const std::string& catalog_path) {
  Dataset ds;
  ds.catalog = load_catalog(catalog_path);
  ds.records = load_log(log_path, ds.catalog);
  return ds;
}

std::vector<std::uint32_t> spatial_candidate_filter(const GeoPoint& u_loc,
                                                    const ItemCatalog& catalog,
                                                    double d_km) {
  if (d_km < 0.0) {
    throw ContractError("spatial_candidate_filter: negative radius " +
                        std::to_string(d_km));
  }
  std::vector<std::uint32_t> out;
  if (std::isinf(d_km)) {
    out.resize(catalog.n_items());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint32_t>(i);
    return out;
  }
  for (std::size_t i = 0; i < catalog.n_items(); ++i) {
    if (haversine_km(u_loc, catalog.location_of[i]) <= d_km)
      out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<std::size_t> item_frequency(const Dataset& ds) {
  std::vector<std::size_t> freq(ds.catalog.n_items(), 0);
  for (const auto& r : ds.records) ++freq[r.item_id];
  return freq;
}

Dataset cold_start_filter(const Dataset& subset,
                          const std::vector<std::size_t>& full_freq,
                          std::size_t threshold) {
  if (threshold < 1) throw ContractError("cold_start_filter: threshold < 1");
  Dataset out;
  out.catalog = subset.catalog;
  for (const auto& r : subset.records) {
    if (full_freq[r.item_id] < threshold) out.records.push_back(r);
  }
  return out;
}

Dataset cold_start_split(const Dataset& ds, std::size_t threshold) {
  return cold_start_filter(ds, item_frequency(ds), threshold);
}

std::pair<Dataset, Dataset> train_eval_split(const Dataset& ds, double ratio,
                                             std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ContractError("train_eval_split: ratio " + std::to_string(ratio) +
                        " outside (0, 1)");
  }
  std::vector<std::uint32_t> groups;
  for (const auto& r : ds.records) groups.push_back(r.request_id);
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());

  Rng rng(seed);
  rng.shuffle(groups);
  const std::size_t n_train =
      static_cast<std::size_t>(ratio * static_cast<double>(groups.size()));

  std::vector<std::uint32_t> train_ids(groups.begin(), groups.begin() + n_train);
  std::sort(train_ids.begin(), train_ids.end());

  Dataset train, eval;
  train.catalog = ds.catalog;
  eval.catalog = ds.catalog;
  for (const auto& r : ds.records) {
    const bool is_train = std::binary_search(train_ids.begin(),
                                             train_ids.end(), r.request_id);
    (is_train ? train : eval).records.push_back(r);
  }
  return {std::move(train), std::move(eval)};
}

}  // namespace rest
