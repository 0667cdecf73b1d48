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

#pragma once

namespace stormrider {

inline constexpr double kEarthRadiusMetres = 6'371'000.0;

/// WGS84 coordinate in degrees.
struct LonLat {
  double lon = 0.0;
  double lat = 0.0;

  bool operator==(const LonLat&) const = default;
};

/// Great-circle distance in metres on a sphere of radius kEarthRadiusMetres.
double haversine(const LonLat& a, const LonLat& b);

/// Point displaced from `origin` by `east`/`north` metres (small-offset
/// equirectangular approximation; used for synthetic placement only).
LonLat offset_metres(const LonLat& origin, double east, double north);

}  // namespace stormrider
