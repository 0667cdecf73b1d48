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
#include <vector>

#include "stormrider/features.hpp"
#include "stormrider/ingest.hpp"

namespace stormrider::eval {

struct PredictionRecord {
  std::string stop_id;
  std::int64_t hour_index = 0;  // target hour, from the panel origin
  LonLat position;
  double observed = 0.0;
  double predicted = 0.0;
  double residual = 0.0;  // predicted - observed
};

PredictionRecord make_record(std::string stop_id, std::int64_t hour_index, LonLat position, double observed,
                             double predicted);

// Overall metrics

inline constexpr std::size_t kBucketCount = 9;

/// Labels of the rounded-residual buckets, most negative first:
/// <-100, -100..-51, -50..-23, -22..-1, 0, 1..22, 23..50, 51..100, >100.
const std::array<std::string_view, kBucketCount>& bucket_labels();

/// Bucket of an integer residual.
std::size_t bucket_of(long long rounded_residual);

struct MetricsReport {
  std::size_t count = 0;
  double rmse = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  std::array<double, kBucketCount> bucket_percent{};
  /// Absent when observed or predicted values are constant.
  std::optional<double> pearson;
  /// Share of records with |rounded residual| <= 22.
  double within_band_fraction = 0.0;
  std::optional<double> training_time_minutes;
};

/// Residuals are rounded half away from zero before bucketing; quartiles use
/// linear interpolation. Throws std::invalid_argument on empty input.
MetricsReport metrics(std::span<const PredictionRecord> predictions);

/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Temporal and stop-level errors

struct HourlyError {
  std::int64_t hour_index = 0;
  double mean_residual = 0.0;
  std::size_t count = 0;
};

/// Mean residual over the records of each hour, ascending by hour.
std::vector<HourlyError> hourly_mean_error(std::span<const PredictionRecord> predictions);

enum class TimeFilter : std::uint8_t { kAll, kPeak, kOffPeak, kWeekday, kWeekend };

std::string_view to_string(TimeFilter f);
/// "all", "peak", "offpeak", "weekday" or "weekend"; ConfigError otherwise.
TimeFilter parse_time_filter(std::string_view text);

struct StopError {
  std::string stop_id;
  LonLat position;
  double mean_residual = 0.0;
  std::size_t count = 0;
};

struct StopErrors {
  std::vector<StopError> stops;       // ordered by stop id
  std::vector<std::string> omitted;   // stops whose records were all filtered out
  std::vector<std::string> warnings;
};

/// Mean residual per stop over the hours passing `filter`. Peak hours are
/// AM/PM peaks on non-holiday weekdays and the weekend peak on Saturdays and
/// Sundays.
StopErrors stop_mean_error(std::span<const PredictionRecord> predictions, TimeFilter filter,
                           const CalendarConfig& calendar, Timestamp origin);

// Extreme weather

enum class WeatherVariable : std::uint8_t { kTemperature, kHumidity, kWindSpeed, kApparentTemperature, kRainfall };
inline constexpr std::size_t kWeatherVariableCount = 5;

std::string_view to_string(WeatherVariable v);
/// Long name ("rainfall") or feature code ("Rf"), case-insensitive.
WeatherVariable parse_weather_variable(std::string_view text);
double weather_value(const HourlyWeather& w, WeatherVariable v);

struct ExtremeOptions {
  double sd_multiplier = 1.5;
  double rain_threshold_mm = 3.0;  // strictly above is extreme
  bool sample_sd = false;          // population SD by default
  /// Hours [first, last) whose values set the mean and SD; empty: all.
  std::optional<std::pair<std::int64_t, std::int64_t>> reference_hours;
};

struct ExtremeWeatherMask {
  std::int64_t hours = 0;
  /// Per variable and hour: above the upper / below the lower threshold.
  std::array<std::vector<std::uint8_t>, kWeatherVariableCount> high;
  std::array<std::vector<std::uint8_t>, kWeatherVariableCount> low;
  std::array<double, kWeatherVariableCount> lower_threshold{};
  std::array<double, kWeatherVariableCount> upper_threshold{};

  [[nodiscard]] bool extreme(WeatherVariable v, std::int64_t hour) const;
  /// 0/1 per hour for either side.
  [[nodiscard]] std::vector<std::uint8_t> flags(WeatherVariable v) const;
};

/// T, H, WS, AT: outside mean +/- 1.5 SD (strict). Rf: above 3 mm (strict).
/// Requires at least 2 hours.
ExtremeWeatherMask extreme_mask(std::span<const HourlyWeather> weather, const ExtremeOptions& options = {});

enum class ExtremeSide : std::uint8_t { kBoth, kHigh, kLow };

/// Per-stop mean residual over the hours flagged for `variable`.
StopErrors extreme_stop_error(std::span<const PredictionRecord> predictions, const ExtremeWeatherMask& mask,
                              WeatherVariable variable, ExtremeSide side = ExtremeSide::kBoth);

struct WeatherBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_residual = 0.0;  // NaN for an empty bin
  std::size_t count = 0;
};

/// Mean residual against the target hour's weather value, in `n_bins`
/// equal-width bins over the observed range (the maximum falls in the last
/// bin). Weather is indexed by hour_index.
std::vector<WeatherBin> error_vs_weather(std::span<const PredictionRecord> predictions,
                                         std::span<const HourlyWeather> weather, WeatherVariable variable,
                                         int n_bins);

struct RidershipDifference {
  std::string stop_id;
  double extreme_mean = 0.0;
  double normal_mean = 0.0;
  double difference = 0.0;  // extreme - normal
};

struct RidershipDifferences {
  std::vector<RidershipDifference> stops;
  std::vector<std::string> omitted;
  std::vector<std::string> warnings;
};

/// Per stop, mean count over flagged hours minus mean count over the rest,
/// for hours [first_hour, counts.hours()).
RidershipDifferences extreme_vs_normal_diff(const StopHourCounts& counts, std::span<const std::uint8_t> extreme_hours,
                                            std::int64_t first_hour = 0);
RidershipDifferences extreme_vs_normal_diff(const StopHourCounts& counts, const ExtremeWeatherMask& mask,
                                            WeatherVariable variable, std::int64_t first_hour = 0);

// Surfaces

struct BoundingBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;
};

struct ValuePoint {
  LonLat position;
  double value = 0.0;
};

/// Box around the points, widened by `margin` of its extent on each side.
BoundingBox bounding_box(std::span<const ValuePoint> points, double margin = 0.05);

struct ErrorSurfaceGrid {
  BoundingBox bbox;
  int n_cols = 0;
  int n_rows = 0;
  /// Row-major from the south-west corner; NaN marks a cell without data.
  std::vector<double> values;

  [[nodiscard]] LonLat cell_centre(int col, int row) const;
  [[nodiscard]] double at(int col, int row) const {
    return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_cols) + static_cast<std::size_t>(col)];
  }
};

inline constexpr double kExactHitMetres = 1.0;

/// Inverse-distance weighting on haversine distances: cell value
/// sum(w v) / sum(w), w = d^-power; a point closer than 1 m supplies the cell
/// value directly. Cells farther than `max_distance` metres from every point
/// are NaN when max_distance > 0.
ErrorSurfaceGrid idw_surface(std::span<const ValuePoint> points, const BoundingBox& bbox, int n_cols, int n_rows,
                             double power = 2.0, double max_distance = 0.0);

/// Stop errors as surface input.
std::vector<ValuePoint> to_points(const StopErrors& errors);

}  // namespace stormrider::eval
