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

#include "rest/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rest/errors.hpp"

namespace rest {

namespace {

constexpr char kAlphabet[] = "0123456789bcdefghjkmnpqrstuvwxyz";

int alphabet_index(char c) {
  for (int i = 0; i < 32; ++i)
    if (kAlphabet[i] == c) return i;
  return -1;
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

GeoPoint::GeoPoint(double lat_deg, double lon_deg) : lat(lat_deg), lon(lon_deg) {
  if (!(lat >= -90.0 && lat <= 90.0)) {
    throw ContractError("GeoPoint: latitude " + std::to_string(lat) +
                        " outside [-90, 90]");
  }
  if (!(lon >= -180.0 && lon <= 180.0)) {
    throw ContractError("GeoPoint: longitude " + std::to_string(lon) +
                        " outside [-180, 180]");
  }
}

GeohashCode geohash_encode(const GeoPoint& p, std::size_t precision) {
  if (precision < 1 || precision > 12) {
    throw ContractError("geohash_encode: precision " +
                        std::to_string(precision) + " outside [1, 12]");
  }
  double lat_lo = -90.0, lat_hi = 90.0;
  double lon_lo = -180.0, lon_hi = 180.0;
  std::string code;
  code.reserve(precision);
  bool even = true;  // even bit index -> longitude
  int bits = 0;
  int ch = 0;
  while (code.size() < precision) {
    if (even) {
      const double mid = (lon_lo + lon_hi) / 2.0;
      ch <<= 1;
      if (p.lon >= mid) {
        ch |= 1;
        lon_lo = mid;
      } else {
        lon_hi = mid;
      }
    } else {
      const double mid = (lat_lo + lat_hi) / 2.0;
      ch <<= 1;
      if (p.lat >= mid) {
        ch |= 1;
        lat_lo = mid;
      } else {
        lat_hi = mid;
      }
    }
    even = !even;
    if (++bits == 5) {
      code.push_back(kAlphabet[ch]);
      bits = 0;
      ch = 0;
    }
  }
  return GeohashCode{std::move(code)};
}

GeohashCell geohash_decode(const GeohashCode& c) {
  double lat_lo = -90.0, lat_hi = 90.0;
  double lon_lo = -180.0, lon_hi = 180.0;
  bool even = true;
  for (std::size_t pos = 0; pos < c.code.size(); ++pos) {
    const int v = alphabet_index(c.code[pos]);
    if (v < 0) {
      throw ParseError(std::string("geohash_decode: invalid character '") +
                       c.code[pos] + "' at position " + std::to_string(pos));
    }
    for (int bit = 4; bit >= 0; --bit) {
      const bool hi = (v >> bit) & 1;
      if (even) {
        const double mid = (lon_lo + lon_hi) / 2.0;
        (hi ? lon_lo : lon_hi) = mid;
      } else {
        const double mid = (lat_lo + lat_hi) / 2.0;
        (hi ? lat_lo : lat_hi) = mid;
      }
      even = !even;
    }
  }
  GeohashCell cell;
  cell.center = GeoPoint((lat_lo + lat_hi) / 2.0, (lon_lo + lon_hi) / 2.0);
  cell.lat_err = (lat_hi - lat_lo) / 2.0;
  cell.lon_err = (lon_hi - lon_lo) / 2.0;
  return cell;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double dphi = deg2rad(b.lat - a.lat);
  const double dlam = deg2rad(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

bool within_radius(const GeoPoint& a, const GeoPoint& b, double r_km) {
  if (r_km < 0.0) {
    throw ContractError("within_radius: negative radius " +
                        std::to_string(r_km));
  }
  return haversine_km(a, b) <= r_km;
}

}  // namespace rest
