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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stormrider/features.hpp"
#include "stormrider/ingest.hpp"

namespace stormrider {

/// Dense column-major single-precision matrix: the learners' input format.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  float operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  float& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }

  [[nodiscard]] std::span<const float> column(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  std::span<float> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

  /// Rows `rows` (in that order) as a new matrix.
  [[nodiscard]] FeatureMatrix gather(std::span<const std::size_t> rows) const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

/// Materialised panel rows: 43 features and the next-hour target, plus the
/// stop and hour each row describes.
struct PanelTable {
  Timestamp origin;
  std::vector<std::string> stop_ids;     // distinct stops
  std::vector<LonLat> stop_positions;    // parallel to stop_ids
  std::vector<std::uint32_t> row_stop;   // index into stop_ids
  std::vector<std::int64_t> row_hour;    // hour of the target, from origin
  FeatureMatrix features;
  std::vector<double> target;

  [[nodiscard]] std::size_t size() const { return target.size(); }
  [[nodiscard]] PanelTable subset(std::span<const std::size_t> rows) const;
};

/// The stop-hour modelling panel.
///
/// Row (stop s, target hour u) predicts counts[s][u] from information at the
/// preceding hour t = u - 1:
///   HourLag = counts[s][u - 1], DayLag = counts[s][u - 24],
///   WeekLag = counts[s][u - 168], weather and calendar at t, SI at (s, t).
/// Targets run over u in [168, hours), so each stop contributes
/// hours - 168 rows and every lag is defined.
///
/// Storage is normalised (per-stop and per-hour blocks plus the count grid);
/// rows are materialised on demand.
class StopHourPanel {
 public:
  static constexpr std::int64_t kWarmUpHours = 168;
  static constexpr std::int64_t kMinimumHours = 170;

  StopHourPanel(StopHourCounts counts, std::vector<HourlyWeather> weather,
                const CalendarConfig& calendar, std::vector<StopRecord> stops,
                std::span<const ServiceWindow> windows);

  [[nodiscard]] std::size_t size() const { return stop_count() * rows_per_stop(); }
  [[nodiscard]] std::size_t stop_count() const { return stops_.size(); }
  [[nodiscard]] std::size_t rows_per_stop() const {
    return static_cast<std::size_t>(counts_.hours() - kWarmUpHours);
  }
  [[nodiscard]] std::size_t stop_of(std::size_t row) const { return row / rows_per_stop(); }
  /// Target hour of a row.
  [[nodiscard]] std::int64_t hour_of(std::size_t row) const {
    return kWarmUpHours + static_cast<std::int64_t>(row % rows_per_stop());
  }

  [[nodiscard]] double feature(std::size_t row, std::size_t f) const;
  [[nodiscard]] double target(std::size_t row) const;
  void fill_row(std::size_t row, std::span<double, kFeatureCount> out) const;

  [[nodiscard]] PanelTable materialize(std::span<const std::size_t> rows) const;
  [[nodiscard]] PanelTable materialize_all() const;

  [[nodiscard]] const StopHourCounts& counts() const { return counts_; }
  [[nodiscard]] const std::vector<StopRecord>& stops() const { return stops_; }
  [[nodiscard]] const std::vector<HourlyWeather>& weather() const { return weather_; }
  [[nodiscard]] Timestamp origin() const { return counts_.origin(); }

 private:
  static constexpr std::size_t kHourBlock = 15;  // T..N: weather and calendar except SI
  static constexpr std::size_t kStopBlock = 24;  // Q1..To

  StopHourCounts counts_;
  std::vector<HourlyWeather> weather_;
  std::vector<StopRecord> stops_;
  std::vector<double> hour_block_;     // hours x kHourBlock
  std::vector<double> stop_block_;     // stops x kStopBlock
  std::vector<std::uint8_t> service_;  // stops x hours
};

/// Validates spans and assembles the panel. Stops are matched to count
/// series by id; windows may be empty (every stop always served).
StopHourPanel build_panel(StopHourCounts counts, std::vector<HourlyWeather> weather,
                          const CalendarConfig& calendar, std::vector<StopRecord> stops,
                          std::span<const ServiceWindow> windows = {});

}  // namespace stormrider
