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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stormrider/geo.hpp"
#include "stormrider/ingest.hpp"

namespace stormrider {

/// Steadman apparent temperature (deg C) from air temperature (deg C),
/// relative humidity (%) and wind speed (m/s):
///   AT = T + 0.33 e - 0.70 WS - 4.00,
///   e  = (H / 100) * 6.105 * exp(17.27 T / (237.7 + T))   [hPa].
/// Throws std::domain_error at or below the T = -237.7 singularity.
double apparent_temperature(double temperature, double humidity, double wind_speed);

// ---------------------------------------------------------------------------
// Feature catalogue
// ---------------------------------------------------------------------------

/// Column order of the 43-predictor matrix. Location and amenity columns
/// are stop-constant; weather and calendar columns are hour-constant except SI.
enum class Feature : std::uint8_t {
  kHourLag,
  kDayLag,
  kWeekLag,
  kTemperature,
  kHumidity,
  kWindSpeed,
  kApparentTemperature,
  kRainfall,
  kHourOfDay,
  kDayOfWeek,
  kWeekend,
  kPublicHoliday,
  kSchoolHoliday,
  kFlexibleDay,
  kAmPeak,
  kPmPeak,
  kWeekendPeak,
  kNight,
  kServiceIncluded,
  kQ1,
  kQ2,
  kQ3,
  kQ4,
  kQ5,
  kCityCentre,
  kInnerCity,
  kOuterRing,
  kBusway,
  kFirstAmenity,  // followed by the remaining 14 amenity categories
};

inline constexpr std::size_t kFeatureCount = 43;
inline constexpr std::size_t kWeatherFeatureCount = 5;
inline constexpr std::size_t kJourneyClassCount = 5;

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }
constexpr std::size_t amenity_feature(AmenityCategory c) {
  return index_of(Feature::kFirstAmenity) + static_cast<std::size_t>(c);
}

/// Short column names in matrix order ("HourLag", ..., "To").
const std::array<std::string_view, kFeatureCount>& feature_names();
std::optional<std::size_t> feature_index(std::string_view name);
bool is_weather_feature(std::size_t index);

// ---------------------------------------------------------------------------
// Stop attributes
// ---------------------------------------------------------------------------

struct StopRecord {
  std::string stop_id;
  LonLat position;
  bool city_centre = false;
  bool inner_city = false;
  bool outer_ring = false;
  bool busway = false;
  std::array<double, kAmenityCategoryCount> amenity_density{};
  std::array<double, kJourneyClassCount> journey_shares{};
};

/// Location flags from ring containment around the CBD: CC below the first
/// radius, IC below the second, OR otherwise.
StopRecord locate_stop(const StopSite& site, const GeographyConfig& geography);

struct AmenityDensity {
  /// Points within the buffer, per stop and category.
  std::vector<std::array<std::uint32_t, kAmenityCategoryCount>> raw;
  /// raw / (max raw over stops) per category; 0 when that max is 0.
  std::vector<std::array<double, kAmenityCategoryCount>> normalized;
};

inline constexpr double kAmenityBufferMetres = 400.0;

/// Counts amenity points within `radius` metres (inclusive, haversine) of
/// each stop. Candidates are pre-filtered by a latitude band before the exact
/// distance test.
AmenityDensity amenity_density(std::span<const LonLat> stops, const AmenityPoints& amenities,
                               double radius = kAmenityBufferMetres);

// ---------------------------------------------------------------------------
// Journey-time classes
// ---------------------------------------------------------------------------

struct JenksBreaks {
  int k = 0;
  /// k - 1 ascending class upper bounds (the last class is unbounded).
  std::vector<double> interior_breaks;
};

/// Fisher-Jenks natural breaks: the k-class partition of the sorted values
/// minimising total within-class sum of squared deviations (exact dynamic
/// program over distinct values weighted by multiplicity).
/// Throws std::invalid_argument when k < 2 or k exceeds the distinct values.
JenksBreaks jenks_breaks(std::span<const double> values, int k);

/// Within-class sum of squared deviations of `values` under `breaks`.
double class_ssd(std::span<const double> values, const JenksBreaks& breaks);

/// Journey-time class boundaries (minutes) reported for the Brisbane network.
JenksBreaks reference_journey_breaks();

/// Class of a duration: 0 when d <= b0, j when b(j-1) < d <= b(j), last
/// class above the final break.
std::size_t journey_class(double minutes, const JenksBreaks& breaks);

/// Per boarding stop, the share of its trips (with a known duration) in each
/// journey-time class. Stops without such trips are absent from the map.
std::unordered_map<std::string, std::array<double, kJourneyClassCount>> journey_time_shares(
    std::span<const TripRecord> trips, const JenksBreaks& breaks);

/// Durations (minutes) of trips with a tap-off boarding before `cutoff`.
std::vector<double> trip_durations(std::span<const TripRecord> trips,
                                   std::optional<Timestamp> cutoff = std::nullopt);

// ---------------------------------------------------------------------------
// Calendar
// ---------------------------------------------------------------------------

struct CalendarFeatures {
  int hour_of_day = 1;  // 1..24
  int day_of_week = 1;  // 1..7, Monday = 1
  bool weekend = false;
  bool public_holiday = false;
  bool school_holiday = false;
  bool flexible_day = false;
  bool am_peak = false;
  bool pm_peak = false;
  bool weekend_peak = false;
  bool night = false;
  bool service = true;
};

/// Calendar dummies of hour `hour_index` after `origin`. AM/PM peaks require
/// a weekday that is not a public holiday. Without a service window the stop
/// counts as served.
CalendarFeatures calendar_features(std::int64_t hour_index, Timestamp origin,
                                   const CalendarConfig& calendar,
                                   const ServiceWindow* window = nullptr);

/// Peak as used for error analysis: AM or PM peak on a non-holiday weekday,
/// or weekend peak on Saturday/Sunday.
bool is_peak(const CalendarFeatures& c);

}  // namespace stormrider
