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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "rest/errors.hpp"
#include "rest/geo.hpp"
#include "rest/rng.hpp"

using namespace rest;

namespace {

GeoPoint random_point(Rng& rng) {
  return GeoPoint(rng.uniform(-90.0, 90.0), rng.uniform(-180.0, 180.0));
}

}  // namespace

TEST_SUITE("geo") {

TEST_CASE("geopoint bounds enforced at construction") {
  CHECK_THROWS_AS(GeoPoint(91.0, 0.0), ContractError);
  CHECK_THROWS_AS(GeoPoint(0.0, -180.5), ContractError);
  CHECK_NOTHROW(GeoPoint(90.0, 180.0));
}

TEST_CASE("encode reproduces the ezs42 vector") {
  const auto code = geohash_encode(GeoPoint(42.605, -5.603), 5);
  CHECK(code.code == "ezs42");
  CHECK(code.code == oracle::geohash_bits(42.605, -5.603, 5));
}

TEST_CASE("encode of the origin at precision 1") {
  CHECK(geohash_encode(GeoPoint(0, 0), 1).code == "s");
  CHECK(oracle::geohash_bits(0, 0, 1) == "s");
}

TEST_CASE("encode matches the bit-interleaving oracle on random points") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint p = random_point(rng);
    const std::size_t prec = 1 + rng.uniform_int(12);
    CHECK(geohash_encode(p, prec).code ==
          oracle::geohash_bits(p.lat, p.lon, prec));
  }
}

TEST_CASE("decode of s is the cell center with half-widths") {
  const auto cell = geohash_decode(GeohashCode{"s"});
  CHECK(cell.center.lat == doctest::Approx(22.5).epsilon(1e-15));
  CHECK(cell.center.lon == doctest::Approx(22.5).epsilon(1e-15));
  CHECK(cell.lat_err == doctest::Approx(22.5).epsilon(1e-15));
  CHECK(cell.lon_err == doctest::Approx(22.5).epsilon(1e-15));
}

TEST_CASE("round trips stay inside the cell") {
  const GeoPoint p(89.9, 179.9);
  const auto cell = geohash_decode(geohash_encode(p, 8));
  CHECK(std::abs(cell.center.lat - p.lat) <= cell.lat_err);
  CHECK(std::abs(cell.center.lon - p.lon) <= cell.lon_err);

  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const GeoPoint q = random_point(rng);
    const auto c12 = geohash_decode(geohash_encode(q, 12));
    CHECK(std::abs(c12.center.lat - q.lat) <= 1e-5);
    CHECK(std::abs(c12.center.lon - q.lon) <= 1e-5);
  }
}

TEST_CASE("decode rejects excluded characters with position") {
  CHECK_THROWS_WITH_AS(geohash_decode(GeohashCode{"a1"}),
                       doctest::Contains("position 0"), ParseError);
  CHECK_THROWS_AS(geohash_decode(GeohashCode{"ez!2"}), ParseError);
}

TEST_CASE("encode rejects out-of-range precision") {
  CHECK_THROWS_AS(geohash_encode(GeoPoint(0, 0), 0), ContractError);
  CHECK_THROWS_AS(geohash_encode(GeoPoint(0, 0), 13), ContractError);
}

TEST_CASE("monotonic refinement: finer cells nest inside coarser ones") {
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const GeoPoint p = random_point(rng);
    for (std::size_t prec = 1; prec < 12; ++prec) {
      const auto a = geohash_decode(geohash_encode(p, prec));
      const auto b = geohash_decode(geohash_encode(p, prec + 1));
      CHECK(b.center.lat - b.lat_err >= a.center.lat - a.lat_err);
      CHECK(b.center.lat + b.lat_err <= a.center.lat + a.lat_err);
      CHECK(b.center.lon - b.lon_err >= a.center.lon - a.lon_err);
      CHECK(b.center.lon + b.lon_err <= a.center.lon + a.lon_err);
    }
  }
}

TEST_CASE("haversine: identical points and equatorial antipodes") {
  const GeoPoint p(13.37, 42.0);
  CHECK(haversine_km(p, p) == 0.0);
  const double half_circumference = std::numbers::pi * kEarthRadiusKm;
  CHECK(haversine_km(GeoPoint(0, 0), GeoPoint(0, 180)) ==
        doctest::Approx(half_circumference).epsilon(1e-12));
}

TEST_CASE("haversine: Beijing to Shanghai about 1067 km") {
  const GeoPoint beijing(39.9042, 116.4074);
  const GeoPoint shanghai(31.2304, 121.4737);
  const double d = haversine_km(beijing, shanghai);
  CHECK(d == doctest::Approx(1067.0).epsilon(0.005));
  CHECK(d == doctest::Approx(oracle::law_of_cosines_km(beijing, shanghai))
                 .epsilon(0.005));
}

TEST_CASE("haversine agrees with the law-of-cosines oracle") {
  Rng rng(24);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint a = random_point(rng);
    const GeoPoint b = random_point(rng);
    const double h = haversine_km(a, b);
    const double o = oracle::law_of_cosines_km(a, b);
    CHECK(std::abs(h - o) <= 0.005 * std::max(o, 1e-9) + 1e-6);
  }
}

TEST_CASE("haversine symmetry is exact") {
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a = random_point(rng);
    const GeoPoint b = random_point(rng);
    CHECK(haversine_km(a, b) == haversine_km(b, a));
  }
}

TEST_CASE("triangle inequality holds on the sphere") {
  Rng rng(26);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a = random_point(rng);
    const GeoPoint b = random_point(rng);
    const GeoPoint c = random_point(rng);
    CHECK(haversine_km(a, c) <=
          haversine_km(a, b) + haversine_km(b, c) + 1e-9);
  }
}

TEST_CASE("within_radius is inclusive and matches the distance") {
  const GeoPoint p(10, 10);
  CHECK(within_radius(p, p, 0.0));
  CHECK(!within_radius(GeoPoint(0, 0), GeoPoint(0, 180), 20000.0));
  CHECK_THROWS_AS(within_radius(p, p, -1.0), ContractError);

  Rng rng(27);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a = random_point(rng);
    const GeoPoint b = random_point(rng);
    const double r = rng.uniform(0.0, 21000.0);
    CHECK(within_radius(a, b, r) == (haversine_km(a, b) <= r));
  }
}

}  // TEST_SUITE
