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
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "stormrider/civil_time.hpp"
#include "stormrider/geo.hpp"
#include "stormrider/kv_config.hpp"

namespace stormrider {

// ---------------------------------------------------------------------------
// Trips
// ---------------------------------------------------------------------------

/// One smart-card tap-on (with optional tap-off).
struct TripRecord {
  std::string card_id;
  std::string journey_id;
  std::string route_id;
  std::string board_stop;
  std::optional<std::string> alight_stop;
  Timestamp board_time;
  std::optional<Timestamp> alight_time;

  /// Minutes from boarding to alighting, when the tap-off is known.
  [[nodiscard]] std::optional<double> duration_minutes() const;
};

/// Column names for each trip field in the header row.
struct TripSchema {
  std::string card_id = "card_id";
  std::string journey_id = "journey_id";
  std::string route_id = "route_id";
  std::string board_stop = "board_stop";
  std::string alight_stop = "alight_stop";
  std::string board_time = "board_time";
  std::string alight_time = "alight_time";
};

struct ParseReport {
  std::size_t rows = 0;
  std::size_t malformed = 0;
  /// First few malformed-row diagnostics ("file:line: reason").
  std::vector<std::string> diagnostics;

  void reject(const std::filesystem::path& file, std::size_t line, std::string_view reason);
};

template <class T>
struct Parsed {
  std::vector<T> records;
  ParseReport report;
};

/// Reads trips. Rows without a boarding stop or with unparsable timestamps
/// are counted as malformed and skipped; a missing file or a header lacking a
/// mapped column throws DataError.
Parsed<TripRecord> parse_trips(const std::filesystem::path& file, const TripSchema& schema = {});

inline constexpr double kMaxTripMinutes = 180.0;

struct CleanReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t ungeocodable = 0;
  std::size_t overlong = 0;
  std::size_t negative_duration = 0;
};

struct CleanResult {
  std::vector<TripRecord> kept;
  CleanReport report;
};

/// Drops trips boarding at unknown stops, lasting more than 180 minutes, or
/// alighting before boarding. Trips without a tap-off are kept.
CleanResult clean_trips(std::span<const TripRecord> trips,
                        const std::unordered_set<std::string>& stops);

/// Keeps trips whose boarding time lies in [origin, origin + hours).
std::vector<TripRecord> filter_window(std::span<const TripRecord> trips, Timestamp origin,
                                      std::int64_t hours);

// ---------------------------------------------------------------------------
// Ridership counts
// ---------------------------------------------------------------------------

/// Boardings per (stop, hour) on a dense stop-major grid. Every cell is
/// present; absent demand is an explicit zero.
class StopHourCounts {
 public:
  StopHourCounts() = default;
  StopHourCounts(std::vector<std::string> stop_ids, Timestamp origin, std::int64_t hours);

  [[nodiscard]] std::size_t stop_count() const { return stop_ids_.size(); }
  [[nodiscard]] std::int64_t hours() const { return hours_; }
  [[nodiscard]] Timestamp origin() const { return origin_; }
  [[nodiscard]] const std::vector<std::string>& stop_ids() const { return stop_ids_; }
  [[nodiscard]] std::optional<std::size_t> stop_index(std::string_view stop_id) const;

  [[nodiscard]] std::uint32_t at(std::size_t stop, std::int64_t hour) const {
    return counts_[stop * static_cast<std::size_t>(hours_) + static_cast<std::size_t>(hour)];
  }
  std::uint32_t& at(std::size_t stop, std::int64_t hour) {
    return counts_[stop * static_cast<std::size_t>(hours_) + static_cast<std::size_t>(hour)];
  }
  [[nodiscard]] std::span<const std::uint32_t> series(std::size_t stop) const {
    return {counts_.data() + stop * static_cast<std::size_t>(hours_),
            static_cast<std::size_t>(hours_)};
  }
  std::span<std::uint32_t> series(std::size_t stop) {
    return {counts_.data() + stop * static_cast<std::size_t>(hours_),
            static_cast<std::size_t>(hours_)};
  }
  [[nodiscard]] std::uint64_t total() const;

  bool operator==(const StopHourCounts&) const = default;

 private:
  std::vector<std::string> stop_ids_;
  Timestamp origin_;
  std::int64_t hours_ = 0;
  std::vector<std::uint32_t> counts_;
};

/// Counts boardings per stop-hour. Every trip must board at one of `stops`
/// inside [origin, origin + hours); anything else throws DataError.
StopHourCounts aggregate_ridership(std::span<const TripRecord> trips,
                                   std::span<const std::string> stops, Timestamp origin,
                                   std::int64_t hours);

// ---------------------------------------------------------------------------
// Weather
// ---------------------------------------------------------------------------

struct WeatherReading {
  Timestamp time;
  double temperature = 0.0;  // deg C
  double humidity = 0.0;     // % relative
  double wind_speed = 0.0;   // m/s
  double rainfall = 0.0;     // mm in the reading interval
};

Parsed<WeatherReading> parse_weather(const std::filesystem::path& file);

struct HourlyWeather {
  std::int64_t hour_index = 0;
  double temperature = 0.0;
  double humidity = 0.0;
  double wind_speed = 0.0;
  double rainfall = 0.0;
  double apparent_temperature = 0.0;
  /// True when the hour had no readings and was filled from its neighbours.
  bool interpolated = false;
};

/// Hourly means (rainfall: sum) over [origin, origin + hours). Empty hours are
/// linearly interpolated between the nearest observed hours (held flat at the
/// ends), with zero rainfall, and flagged.
std::vector<HourlyWeather> hourly_weather(std::span<const WeatherReading> readings,
                                          Timestamp origin, std::int64_t hours);

// ---------------------------------------------------------------------------
// Calendar and service windows
// ---------------------------------------------------------------------------

/// Inclusive range of clock hours; wraps midnight when first > last.
struct HourRange {
  int first = 0;
  int last = 0;

  [[nodiscard]] bool contains(int hour) const {
    return first <= last ? (hour >= first && hour <= last) : (hour >= first || hour <= last);
  }
  bool operator==(const HourRange&) const = default;
};

struct DateRange {
  CivilDate first;
  CivilDate last;
};

struct CalendarConfig {
  std::set<CivilDate> public_holidays;
  std::vector<DateRange> school_holidays;
  std::set<CivilDate> flexible_dev_days;
  HourRange am_peak{7, 8};         // Mon-Fri work days
  HourRange pm_peak{15, 17};       // Mon-Fri work days
  HourRange weekend_peak{9, 17};   // Sat-Sun
  HourRange night_hours{22, 5};

  [[nodiscard]] bool is_public_holiday(const CivilDate& d) const {
    return public_holidays.contains(d);
  }
  [[nodiscard]] bool is_school_holiday(const CivilDate& d) const;
  [[nodiscard]] bool is_flexible_day(const CivilDate& d) const {
    return flexible_dev_days.contains(d);
  }
  /// Throws ConfigError on hours outside 0-23 or reversed date ranges.
  void validate() const;
};

/// Reads the `[calendar]` section; missing keys keep their defaults.
CalendarConfig load_calendar(const KvConfig& config);

/// Service hours of one stop: half-open [start_hour, end_hour) intervals per
/// ISO weekday (index 0 = Monday).
struct ServiceInterval {
  int start_hour = 0;
  int end_hour = 24;
};

struct ServiceWindow {
  std::string stop_id;
  std::array<std::vector<ServiceInterval>, 7> by_weekday;

  [[nodiscard]] bool covers(int iso_weekday, int hour) const;
  /// Throws DataError on out-of-range or overlapping intervals.
  void validate() const;
};

/// Columns: stop_id, weekday (1-7, Monday = 1), start_hour, end_hour.
std::vector<ServiceWindow> parse_service_windows(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Stops, amenities, geography
// ---------------------------------------------------------------------------

/// Stop geometry as read from stops.csv.
struct StopSite {
  std::string stop_id;
  LonLat position;
  bool busway = false;
};

/// Columns: stop_id, lon, lat and optionally busway (0/1).
std::vector<StopSite> parse_stops(const std::filesystem::path& file);

enum class AmenityCategory : std::uint8_t {
  kSustenance,
  kEducation,
  kUniversity,
  kTransport,
  kFinancial,
  kHealthcare,
  kSmallEntertainment,
  kLargeEntertainment,
  kNightEntertainment,
  kReligious,
  kCivic,
  kInfrastructure,
  kLeisure,
  kShops,
  kTourism,
};
inline constexpr std::size_t kAmenityCategoryCount = 15;

/// Long name ("sustenance") used in amenities.csv.
std::string_view amenity_name(AmenityCategory c);
/// Feature code ("Sn").
std::string_view amenity_code(AmenityCategory c);
/// Accepts either the long name or the code, case-insensitively.
std::optional<AmenityCategory> parse_amenity_category(std::string_view text);

using AmenityPoints = std::array<std::vector<LonLat>, kAmenityCategoryCount>;

/// Columns: category, lon, lat. Unknown categories count as malformed.
Parsed<std::pair<AmenityCategory, LonLat>> parse_amenities(const std::filesystem::path& file);
AmenityPoints group_amenities(std::span<const std::pair<AmenityCategory, LonLat>> points);

/// Ring geometry used to assign the CC/IC/OR location flags.
struct GeographyConfig {
  LonLat cbd{153.0251, -27.4698};
  /// City-centre, inner-city and outer-ring boundary radii in metres.
  std::array<double, 3> ring_radii{1'500.0, 6'000.0, 20'000.0};

  void validate() const;
};

/// Reads `[geography] cbd = [lon, lat]`, `ring_radii = [r1, r2, r3]`.
GeographyConfig load_geography(const KvConfig& config);

/// Panel time span: `[panel] origin = "YYYY-MM-DDTHH:MM"`, `hours = N`.
struct PanelWindow {
  Timestamp origin;
  std::int64_t hours = 0;
};
std::optional<PanelWindow> load_panel_window(const KvConfig& config);

}  // namespace stormrider
