// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stormrider/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stormrider {
namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine(const LonLat& a, const LonLat& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusMetres * std::asin(std::min(1.0, std::sqrt(h)));
}

LonLat offset_metres(const LonLat& origin, double east, double north) {
  const double dlat = north / kEarthRadiusMetres / kDegToRad;
  const double dlon = east / (kEarthRadiusMetres * std::cos(origin.lat * kDegToRad)) / kDegToRad;
  return LonLat{origin.lon + dlon, origin.lat + dlat};
}

}  // namespace stormrider
