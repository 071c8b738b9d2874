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

#include <string>

namespace rest {

// IUGG mean earth radius.
inline constexpr double kEarthRadiusKm = 6371.0;

// A latitude/longitude pair in degrees; bounds checked at construction.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg);
};

// Base-32 geohash cell code (alphabet 0-9 b-z excluding a,i,l,o).
struct GeohashCode {
  std::string code;

  std::size_t precision() const { return code.size(); }
};

// Cell center plus half-widths recovered from a geohash code.
struct GeohashCell {
  GeoPoint center;
  double lat_err = 0.0;  // half-width, degrees
  double lon_err = 0.0;
};

// Interleaved bisection encoding, even bits longitude, 5 bits per character.
// precision must be in [1, 12].
GeohashCode geohash_encode(const GeoPoint& p, std::size_t precision);

// Decodes to the cell center; throws ParseError naming the offending
// position on an invalid character.
GeohashCell geohash_decode(const GeohashCode& c);

// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Inclusive radius test. r_km must be >= 0.
bool within_radius(const GeoPoint& a, const GeoPoint& b, double r_km);

}  // namespace rest
