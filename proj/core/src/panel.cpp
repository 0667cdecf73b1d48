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

#include "stormrider/panel.hpp"

#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "stormrider/errors.hpp"

namespace stormrider {

FeatureMatrix FeatureMatrix::gather(std::span<const std::size_t> rows) const {
  FeatureMatrix out(rows.size(), cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    const float* src = data_.data() + c * rows_;
    float* dst = out.data_.data() + c * rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

PanelTable PanelTable::subset(std::span<const std::size_t> rows) const {
  PanelTable out;
  out.origin = origin;
  out.stop_ids = stop_ids;
  out.stop_positions = stop_positions;
  out.features = features.gather(rows);
  out.row_stop.reserve(rows.size());
  out.row_hour.reserve(rows.size());
  out.target.reserve(rows.size());
  for (auto r : rows) {
    out.row_stop.push_back(row_stop[r]);
    out.row_hour.push_back(row_hour[r]);
    out.target.push_back(target[r]);
  }
  return out;
}

StopHourPanel::StopHourPanel(StopHourCounts counts, std::vector<HourlyWeather> weather,
                             const CalendarConfig& calendar, std::vector<StopRecord> stops,
                             std::span<const ServiceWindow> windows)
    : counts_(std::move(counts)), weather_(std::move(weather)) {
  const std::int64_t hours = counts_.hours();
  if (hours < kMinimumHours) {
    throw DataError("build_panel: span of " + std::to_string(hours) + " hours is shorter than " +
                    std::to_string(kMinimumHours));
  }
  if (static_cast<std::int64_t>(weather_.size()) != hours) {
    throw DataError("build_panel: weather covers " + std::to_string(weather_.size()) +
                    " hours, counts cover " + std::to_string(hours));
  }

  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < stops.size(); ++i) by_id.emplace(stops[i].stop_id, i);
  stops_.reserve(counts_.stop_count());
  for (const auto& id : counts_.stop_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("build_panel: no stop record for '" + id + "'");
    stops_.push_back(stops[it->second]);
  }

  const auto n_hours = static_cast<std::size_t>(hours);
  hour_block_.resize(n_hours * kHourBlock);
  for (std::size_t h = 0; h < n_hours; ++h) {
    const auto& w = weather_[h];
    const auto c = calendar_features(static_cast<std::int64_t>(h), counts_.origin(), calendar);
    double* b = &hour_block_[h * kHourBlock];
    b[0] = w.temperature;
    b[1] = w.humidity;
    b[2] = w.wind_speed;
    b[3] = w.apparent_temperature;
    b[4] = w.rainfall;
    b[5] = c.hour_of_day;
    b[6] = c.day_of_week;
    b[7] = c.weekend;
    b[8] = c.public_holiday;
    b[9] = c.school_holiday;
    b[10] = c.flexible_day;
    b[11] = c.am_peak;
    b[12] = c.pm_peak;
    b[13] = c.weekend_peak;
    b[14] = c.night;
  }

  stop_block_.resize(stops_.size() * kStopBlock);
  for (std::size_t s = 0; s < stops_.size(); ++s) {
    const auto& st = stops_[s];
    double* b = &stop_block_[s * kStopBlock];
    for (std::size_t j = 0; j < kJourneyClassCount; ++j) b[j] = st.journey_shares[j];
    b[5] = st.city_centre;
    b[6] = st.inner_city;
    b[7] = st.outer_ring;
    b[8] = st.busway;
    for (std::size_t a = 0; a < kAmenityCategoryCount; ++a) b[9 + a] = st.amenity_density[a];
  }

  service_.assign(stops_.size() * n_hours, 1);
  if (!windows.empty()) {
    std::unordered_map<std::string_view, const ServiceWindow*> window_of;
    for (const auto& w : windows) window_of.emplace(w.stop_id, &w);
    // Weekday and clock hour of each panel hour, shared by all stops.
    std::vector<std::pair<int, int>> when(n_hours);
    for (std::size_t h = 0; h < n_hours; ++h) {
      const auto t = counts_.origin().plus_hours(static_cast<std::int64_t>(h));
      when[h] = {t.weekday(), t.hour_of_day()};
    }
    for (std::size_t s = 0; s < stops_.size(); ++s) {
      auto it = window_of.find(stops_[s].stop_id);
      for (std::size_t h = 0; h < n_hours; ++h) {
        service_[s * n_hours + h] =
            it != window_of.end() && it->second->covers(when[h].first, when[h].second);
      }
    }
  }
}

double StopHourPanel::feature(std::size_t row, std::size_t f) const {
  const std::size_t s = stop_of(row);
  const std::int64_t u = hour_of(row);
  const std::int64_t t = u - 1;
  switch (f) {
    case index_of(Feature::kHourLag):
      return counts_.at(s, u - 1);
    case index_of(Feature::kDayLag):
      return counts_.at(s, u - 24);
    case index_of(Feature::kWeekLag):
      return counts_.at(s, u - 168);
    case index_of(Feature::kServiceIncluded):
      return service_[s * static_cast<std::size_t>(counts_.hours()) + static_cast<std::size_t>(t)];
    default:
      break;
  }
  if (f >= index_of(Feature::kTemperature) && f <= index_of(Feature::kNight)) {
    return hour_block_[static_cast<std::size_t>(t) * kHourBlock + (f - index_of(Feature::kTemperature))];
  }
  if (f >= index_of(Feature::kQ1) && f < kFeatureCount) {
    return stop_block_[s * kStopBlock + (f - index_of(Feature::kQ1))];
  }
  throw std::out_of_range("StopHourPanel::feature: bad feature index");
}

double StopHourPanel::target(std::size_t row) const { return counts_.at(stop_of(row), hour_of(row)); }

void StopHourPanel::fill_row(std::size_t row, std::span<double, kFeatureCount> out) const {
  for (std::size_t f = 0; f < kFeatureCount; ++f) out[f] = feature(row, f);
}

PanelTable StopHourPanel::materialize(std::span<const std::size_t> rows) const {
  PanelTable table;
  table.origin = counts_.origin();
  table.stop_ids = counts_.stop_ids();
  for (const auto& s : stops_) table.stop_positions.push_back(s.position);
  table.features = FeatureMatrix(rows.size(), kFeatureCount);
  table.row_stop.resize(rows.size());
  table.row_hour.resize(rows.size());
  table.target.resize(rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::size_t r = rows[k];
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      table.features(k, f) = static_cast<float>(feature(r, f));
    }
    table.row_stop[k] = static_cast<std::uint32_t>(stop_of(r));
    table.row_hour[k] = hour_of(r);
    table.target[k] = target(r);
  }
  return table;
}

PanelTable StopHourPanel::materialize_all() const {
  std::vector<std::size_t> rows(size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return materialize(rows);
}

StopHourPanel build_panel(StopHourCounts counts, std::vector<HourlyWeather> weather,
                          const CalendarConfig& calendar, std::vector<StopRecord> stops,
                          std::span<const ServiceWindow> windows) {
  return StopHourPanel(std::move(counts), std::move(weather), calendar, std::move(stops), windows);
}

}  // namespace stormrider
