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

#include "rest/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rest/errors.hpp"
#include "rest/rng.hpp"

namespace rest {

namespace {

constexpr double kKmPerDegLat = 110.574;
constexpr double kKmPerDegLonEquator = 111.320;

// Offset a point by kilometers, small-displacement approximation.
GeoPoint offset_km(const GeoPoint& base, double north_km, double east_km) {
  const double lat = base.lat + north_km / kKmPerDegLat;
  const double lon =
      base.lon +
      east_km / (kKmPerDegLonEquator * std::cos(base.lat * std::numbers::pi / 180.0));
  return GeoPoint(std::clamp(lat, -90.0, 90.0), std::clamp(lon, -180.0, 180.0));
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void SynthConfig::validate() const {
  if (n_cities == 0 || n_users == 0 || n_items == 0 || n_brands == 0 ||
      n_categories == 0 || n_records == 0 || candidates_per_request == 0) {
    throw ConfigError("synth: all counts must be positive");
  }
  if (city_radius_km <= 0.0) throw ConfigError("synth: city_radius_km <= 0");
  if (candidate_radius_km <= 0.0)
    throw ConfigError("synth: candidate_radius_km <= 0");
  if (chain_fraction < 0.0 || chain_fraction > 1.0)
    throw ConfigError("synth: chain_fraction outside [0, 1]");
  if (label_noise < 0.0 || label_noise > 1.0)
    throw ConfigError("synth: label_noise outside [0, 1]");
  if (zipf_exponent < 0.0) throw ConfigError("synth: zipf_exponent < 0");
}

Dataset synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  // City centers spread over a continental box.
  std::vector<GeoPoint> city_center;
  for (std::uint32_t c = 0; c < cfg.n_cities; ++c) {
    city_center.emplace_back(rng.uniform(25.0, 45.0), rng.uniform(100.0, 124.0));
  }

  // Brands: one home category each; a chain_fraction of them span cities.
  const std::uint32_t n_chain = static_cast<std::uint32_t>(
      std::llround(cfg.chain_fraction * cfg.n_brands));
  std::vector<std::uint32_t> brand_category(cfg.n_brands);
  std::vector<std::uint32_t> brand_home_city(cfg.n_brands);
  for (std::uint32_t b = 0; b < cfg.n_brands; ++b) {
    brand_category[b] = static_cast<std::uint32_t>(rng.uniform_int(cfg.n_categories));
    brand_home_city[b] = static_cast<std::uint32_t>(rng.uniform_int(cfg.n_cities));
  }

  // Items mostly follow their brand's home category, with a minority that
  // deviates so brand and category carry distinct signals. Chain brands
  // place stores anywhere.
  constexpr double kCategoryCoherence = 0.85;
  ItemCatalog catalog;
  catalog.n_brands = cfg.n_brands;
  catalog.n_categories = cfg.n_categories;
  std::vector<std::uint32_t> item_city(cfg.n_items);
  for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
    const std::uint32_t b = static_cast<std::uint32_t>(rng.uniform_int(cfg.n_brands));
    const std::uint32_t city = b < n_chain
                                   ? static_cast<std::uint32_t>(rng.uniform_int(cfg.n_cities))
                                   : brand_home_city[b];
    const std::uint32_t cat =
        rng.uniform() < kCategoryCoherence
            ? brand_category[b]
            : static_cast<std::uint32_t>(rng.uniform_int(cfg.n_categories));
    item_city[i] = city;
    catalog.brand_of.push_back(b);
    catalog.category_of.push_back(cat);
    catalog.location_of.push_back(offset_km(city_center[city],
                                            rng.gaussian(0.0, cfg.city_radius_km),
                                            rng.gaussian(0.0, cfg.city_radius_km)));
  }

  // Zipf popularity over a random item permutation, so id order carries no
  // popularity signal.
  std::vector<std::uint32_t> perm(cfg.n_items);
  for (std::uint32_t i = 0; i < cfg.n_items; ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<double> popularity(cfg.n_items);
  std::vector<double> pop_score(cfg.n_items);  // [0, 1], 1 = most popular
  for (std::uint32_t rank = 0; rank < cfg.n_items; ++rank) {
    popularity[perm[rank]] =
        1.0 / std::pow(static_cast<double>(rank + 1), cfg.zipf_exponent);
    pop_score[perm[rank]] = 1.0 - std::log(static_cast<double>(rank + 1)) /
                                      std::log(static_cast<double>(cfg.n_items) + 1.0);
  }

  // Latent interaction structure: items inherit factors from their brand,
  // category and, crucially, their city. Co-located same-attribute items
  // share interaction patterns; the city component is invisible to a model
  // without geographic inputs.
  constexpr std::uint32_t kLatentDim = 4;
  auto latent = [&](double scale) {
    std::vector<double> v(kLatentDim);
    for (auto& x : v) x = scale * rng.gaussian();
    return v;
  };
  std::vector<std::vector<double>> brand_vec, cat_vec, city_vec;
  for (std::uint32_t b = 0; b < cfg.n_brands; ++b) brand_vec.push_back(latent(1.0));
  for (std::uint32_t c = 0; c < cfg.n_categories; ++c) cat_vec.push_back(latent(1.0));
  for (std::uint32_t k = 0; k < cfg.n_cities; ++k) city_vec.push_back(latent(1.0));

  std::vector<std::vector<double>> item_lat(cfg.n_items);
  for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
    item_lat[i].resize(kLatentDim);
    const auto noise = latent(1.0);
    for (std::uint32_t j = 0; j < kLatentDim; ++j) {
      item_lat[i][j] = 0.7 * brand_vec[catalog.brand_of[i]][j] +
                       0.7 * cat_vec[catalog.category_of[i]][j] +
                       1.0 * city_vec[item_city[i]][j] + 0.3 * noise[j];
    }
  }

  // Users: home location plus latent taste anchored to the home city.
  std::vector<GeoPoint> user_home(cfg.n_users);
  std::vector<std::vector<double>> user_lat(cfg.n_users);
  for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
    const std::uint32_t home = static_cast<std::uint32_t>(rng.uniform_int(cfg.n_cities));
    user_home[u] = offset_km(city_center[home],
                             rng.gaussian(0.0, cfg.city_radius_km / 2.0),
                             rng.gaussian(0.0, cfg.city_radius_km / 2.0));
    user_lat[u] = latent(0.8);
    for (std::uint32_t j = 0; j < kLatentDim; ++j) {
      user_lat[u][j] += 0.6 * city_vec[home][j];
    }
  }

  auto affinity = [&](std::uint32_t u, std::uint32_t i) {
    double acc = 0.0;
    for (std::uint32_t j = 0; j < kLatentDim; ++j)
      acc += user_lat[u][j] * item_lat[i][j];
    return acc / std::sqrt(static_cast<double>(kLatentDim));
  };

  // History sampling weights per user: popularity x distance decay x
  // affinity. Cached cumulative arrays; no RNG involved, so caching does
  // not disturb determinism.
  std::vector<std::vector<double>> history_cum(cfg.n_users);
  auto history_weights = [&](std::uint32_t u) -> const std::vector<double>& {
    auto& cum = history_cum[u];
    if (cum.empty()) {
      cum.resize(cfg.n_items);
      double acc = 0.0;
      for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
        const double dist = haversine_km(user_home[u], catalog.location_of[i]);
        acc += popularity[i] * std::exp(-dist / 15.0) *
               std::exp(std::clamp(affinity(u, i), -4.0, 4.0));
        cum[i] = acc;
      }
    }
    return cum;
  };

  Dataset ds;
  ds.catalog = catalog;
  const std::uint32_t n_requests =
      (cfg.n_records + cfg.candidates_per_request - 1) / cfg.candidates_per_request;

  std::uint32_t request_id = 0;
  for (std::uint32_t req = 0; req < n_requests; ++req) {
    const std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_int(cfg.n_users));

    // Place the user; fall back toward denser ground if the radius is empty.
    GeoPoint loc = user_home[u];
    std::vector<std::uint32_t> pool;
    for (int attempt = 0; attempt < 20; ++attempt) {
      const GeoPoint jittered =
          offset_km(loc, rng.gaussian(0.0, 0.5), rng.gaussian(0.0, 0.5));
      pool = spatial_candidate_filter(jittered, catalog, cfg.candidate_radius_km);
      if (!pool.empty()) {
        loc = jittered;
        break;
      }
      loc = city_center[rng.uniform_int(cfg.n_cities)];
    }
    if (pool.empty()) continue;  // pathological config; skip the request

    // Popularity-weighted candidates, distinct within the request.
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> avail = pool;
    const std::uint32_t want =
        std::min<std::uint32_t>(cfg.candidates_per_request,
                                static_cast<std::uint32_t>(avail.size()));
    for (std::uint32_t k = 0; k < want; ++k) {
      std::vector<double> cum(avail.size());
      double acc = 0.0;
      for (std::size_t j = 0; j < avail.size(); ++j) {
        acc += popularity[avail[j]];
        cum[j] = acc;
      }
      const std::size_t pick = rng.pick_cumulative(cum);
      chosen.push_back(avail[pick]);
      avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    // History shared by the request's records.
    const std::uint32_t h_len =
        static_cast<std::uint32_t>(rng.uniform_int(cfg.history_length_max + 1));
    std::vector<std::uint32_t> history;
    const auto& cum = history_weights(u);
    for (std::uint32_t h = 0; h < h_len; ++h) {
      history.push_back(static_cast<std::uint32_t>(rng.pick_cumulative(cum)));
    }

    for (std::uint32_t item : chosen) {
      const double dist = haversine_km(loc, catalog.location_of[item]);
      const double z = 1.5 * affinity(u, item) +
                       0.9 * (pop_score[item] - 0.5) +
                       0.3 * (0.5 - dist / cfg.candidate_radius_km) - 0.35;
      int label = rng.uniform() < stable_sigmoid(z) ? 1 : 0;
      if (rng.uniform() < cfg.label_noise) label = 1 - label;

      InteractionRecord r;
      r.user_id = u;
      r.request_id = request_id;
      r.item_id = item;
      r.history = history;
      r.user_location = loc;
      r.label = label;
      ds.records.push_back(std::move(r));
    }
    ++request_id;
  }
  return ds;
}

}  // namespace rest
