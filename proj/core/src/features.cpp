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

#include "stormrider/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stormrider {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "HourLag", "DayLag", "WeekLag", "T",  "H",  "WS", "AT", "Rf", "Hr", "Dw", "We",
    "P",       "S",      "Fd",      "AM", "PM", "Wp", "N",  "SI", "Q1", "Q2", "Q3",
    "Q4",      "Q5",     "CC",      "IC", "OR", "BW", "Sn", "Ed", "U",  "Tp", "Fn",
    "Hc",      "SE",     "LE",      "NE", "Rl", "Cv", "In", "L",  "Sh", "To"};

}  // namespace

double apparent_temperature(double temperature, double humidity, double wind_speed) {
  if (!(temperature > -237.7)) {
    throw std::domain_error("apparent_temperature: temperature at or below -237.7 C");
  }
  const double vapour_pressure =
      (humidity / 100.0) * 6.105 * std::exp(17.27 * temperature / (237.7 + temperature));
  return temperature + 0.33 * vapour_pressure - 0.70 * wind_speed - 4.00;
}

const std::array<std::string_view, kFeatureCount>& feature_names() { return kFeatureNames; }

std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return i;
  }
  return std::nullopt;
}

bool is_weather_feature(std::size_t index) {
  return index >= index_of(Feature::kTemperature) && index <= index_of(Feature::kRainfall);
}

StopRecord locate_stop(const StopSite& site, const GeographyConfig& geography) {
  StopRecord s;
  s.stop_id = site.stop_id;
  s.position = site.position;
  s.busway = site.busway;
  const double d = haversine(site.position, geography.cbd);
  if (d < geography.ring_radii[0]) {
    s.city_centre = true;
  } else if (d < geography.ring_radii[1]) {
    s.inner_city = true;
  } else {
    s.outer_ring = true;
  }
  return s;
}

AmenityDensity amenity_density(std::span<const LonLat> stops, const AmenityPoints& amenities,
                               double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("amenity_density: radius must be positive");
  // A point further than `radius` in latitude alone is further than `radius`
  // on the sphere, so a latitude band bounds the candidates.
  const double band_deg = radius / kEarthRadiusMetres * 180.0 / std::numbers::pi * (1.0 + 1e-9);

  std::array<std::vector<LonLat>, kAmenityCategoryCount> sorted;
  for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
    sorted[c] = amenities[c];
    std::sort(sorted[c].begin(), sorted[c].end(),
              [](const LonLat& a, const LonLat& b) { return a.lat < b.lat; });
  }

  AmenityDensity out;
  out.raw.assign(stops.size(), {});
  const auto n = static_cast<std::ptrdiff_t>(stops.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const LonLat& s = stops[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
      const auto& pts = sorted[c];
      auto it = std::lower_bound(pts.begin(), pts.end(), s.lat - band_deg,
                                 [](const LonLat& p, double lat) { return p.lat < lat; });
      std::uint32_t count = 0;
      for (; it != pts.end() && it->lat <= s.lat + band_deg; ++it) {
        if (haversine(s, *it) <= radius) ++count;
      }
      out.raw[static_cast<std::size_t>(i)][c] = count;
    }
  }

  std::array<std::uint32_t, kAmenityCategoryCount> max_raw{};
  for (const auto& r : out.raw) {
    for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) max_raw[c] = std::max(max_raw[c], r[c]);
  }
  out.normalized.assign(stops.size(), {});
  for (std::size_t i = 0; i < stops.size(); ++i) {
    for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
      out.normalized[i][c] =
          max_raw[c] == 0 ? 0.0 : static_cast<double>(out.raw[i][c]) / static_cast<double>(max_raw[c]);
    }
  }
  return out;
}

JenksBreaks reference_journey_breaks() { return JenksBreaks{5, {6.85, 11.68, 17.43, 25.5}}; }

std::size_t journey_class(double minutes, const JenksBreaks& breaks) {
  const auto& b = breaks.interior_breaks;
  // First break >= minutes; a duration equal to a break stays in the lower class.
  return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), minutes) - b.begin());
}

std::unordered_map<std::string, std::array<double, kJourneyClassCount>> journey_time_shares(
    std::span<const TripRecord> trips, const JenksBreaks& breaks) {
  if (breaks.interior_breaks.size() + 1 != kJourneyClassCount) {
    throw std::invalid_argument("journey_time_shares: needs five journey-time classes");
  }
  if (!std::is_sorted(breaks.interior_breaks.begin(), breaks.interior_breaks.end())) {
    throw std::invalid_argument("journey_time_shares: breaks must be ascending");
  }
  std::unordered_map<std::string, std::array<std::uint64_t, kJourneyClassCount>> tallies;
  for (const auto& t : trips) {
    const auto d = t.duration_minutes();
    if (!d) continue;
    ++tallies[t.board_stop][journey_class(*d, breaks)];
  }
  std::unordered_map<std::string, std::array<double, kJourneyClassCount>> shares;
  for (const auto& [stop, counts] : tallies) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    auto& s = shares[stop];
    for (std::size_t j = 0; j < kJourneyClassCount; ++j) {
      s[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
    }
  }
  return shares;
}

std::vector<double> trip_durations(std::span<const TripRecord> trips,
                                   std::optional<Timestamp> cutoff) {
  std::vector<double> out;
  out.reserve(trips.size());
  for (const auto& t : trips) {
    if (cutoff && !(t.board_time < *cutoff)) continue;
    if (auto d = t.duration_minutes()) out.push_back(*d);
  }
  return out;
}

CalendarFeatures calendar_features(std::int64_t hour_index, Timestamp origin,
                                   const CalendarConfig& calendar, const ServiceWindow* window) {
  const Timestamp t = origin.plus_hours(hour_index);
  const CivilDate date = t.date();
  const int hour = t.hour_of_day();
  CalendarFeatures c;
  c.hour_of_day = hour + 1;
  c.day_of_week = t.weekday();
  c.weekend = c.day_of_week >= 6;
  c.public_holiday = calendar.is_public_holiday(date);
  c.school_holiday = calendar.is_school_holiday(date);
  c.flexible_day = calendar.is_flexible_day(date);
  const bool work_day = !c.weekend && !c.public_holiday;
  c.am_peak = work_day && calendar.am_peak.contains(hour);
  c.pm_peak = work_day && calendar.pm_peak.contains(hour);
  c.weekend_peak = c.weekend && calendar.weekend_peak.contains(hour);
  c.night = calendar.night_hours.contains(hour);
  c.service = window == nullptr || window->covers(c.day_of_week, hour);
  return c;
}

bool is_peak(const CalendarFeatures& c) { return c.am_peak || c.pm_peak || c.weekend_peak; }

}  // namespace stormrider
