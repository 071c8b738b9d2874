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
#include <string>
#include <vector>

#include "rest/geo.hpp"

namespace rest {

// Per-item brand, category and location; the ground truth for sampling
// eligibility. Item ids are dense 0..n_items-1, brand/category ids dense
// below their vocab sizes.
struct ItemCatalog {
  std::vector<std::uint32_t> brand_of;
  std::vector<std::uint32_t> category_of;
  std::vector<GeoPoint> location_of;
  std::uint32_t n_brands = 0;
  std::uint32_t n_categories = 0;

  std::size_t n_items() const { return brand_of.size(); }

  // Throws IndexError naming the id when it does not resolve.
  void check_item(std::uint32_t item_id) const;
};

// One labeled impression.
struct InteractionRecord {
  std::uint32_t user_id = 0;
  std::uint32_t request_id = 0;
  std::uint32_t item_id = 0;  // the radius-constrained candidate
  std::vector<std::uint32_t> history;
  GeoPoint user_location;
  int label = 0;  // 0/1
};

struct Dataset {
  std::vector<InteractionRecord> records;
  ItemCatalog catalog;

  // max user id + 1; 0 for an empty dataset.
  std::uint32_t n_users() const;
};

// --- file formats ------------------------------------------------------
//
// Catalog: UTF-8 CSV, header "item_id,brand_id,category_id,lat,lon",
// one row per item in id order (row i must carry item_id i).
//
// Interaction log: UTF-8 CSV, header
//   "user_id,request_id,item_id,brand_id,category_id,lat,lon,label,history"
// where lat/lon are the user location, brand/category are the candidate
// item's (and must agree with the catalog), and history is a
// pipe-separated item id list (empty allowed).

void save_catalog(const ItemCatalog& catalog, const std::string& path);
ItemCatalog load_catalog(const std::string& path);

void save_log(const Dataset& ds, const std::string& path);
// Parses and validates records against `catalog`; malformed rows raise
// ParseError with line numbers, unresolved ids raise IndexError.
std::vector<InteractionRecord> load_log(const std::string& path,
                                        const ItemCatalog& catalog);

Dataset load_dataset(const std::string& log_path,
                     const std::string& catalog_path);

// --- dataset operations -------------------------------------------------

// Item ids whose location is within d_km of u_loc (inclusive), ascending.
// Pass an infinite d_km to disable the constraint.
std::vector<std::uint32_t> spatial_candidate_filter(const GeoPoint& u_loc,
                                                    const ItemCatalog& catalog,
                                                    double d_km);

// Records whose candidate item occurs fewer than `threshold` times in the
// full dataset. threshold must be >= 1.
Dataset cold_start_split(const Dataset& ds, std::size_t threshold = 3);

// Records of `subset` whose candidate occurs fewer than `threshold` times
// according to `full_freq` (item_frequency of the full corpus). Used to take
// the cold slice of an eval split while counting over train + eval.
Dataset cold_start_filter(const Dataset& subset,
                          const std::vector<std::size_t>& full_freq,
                          std::size_t threshold);

// Request-group-disjoint split; deterministic under seed.
// ratio must be in (0, 1).
std::pair<Dataset, Dataset> train_eval_split(const Dataset& ds, double ratio,
                                             std::uint64_t seed);

// Occurrence count per item id over the records' candidates.
std::vector<std::size_t> item_frequency(const Dataset& ds);

}  // namespace rest
