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

#include "stormrider/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/features.hpp"

namespace stormrider {
namespace {

constexpr std::size_t kMaxDiagnostics = 20;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

constexpr std::array<std::string_view, kAmenityCategoryCount> kAmenityNames = {
    "sustenance",          "education",           "university", "transport", "financial",
    "healthcare",          "small_entertainment", "large_entertainment",
    "night_entertainment", "religious",           "civic",      "infrastructure",
    "leisure",             "shops",               "tourism"};

constexpr std::array<std::string_view, kAmenityCategoryCount> kAmenityCodes = {
    "Sn", "Ed", "U", "Tp", "Fn", "Hc", "SE", "LE", "NE", "Rl", "Cv", "In", "L", "Sh", "To"};

HourRange hour_range(const KvConfig& cfg, std::string_view key, HourRange fallback) {
  auto v = cfg.numbers(key);
  if (!v) return fallback;
  if (v->size() != 2) throw ConfigError("calendar key '" + std::string(key) + "' needs [first, last]");
  return HourRange{static_cast<int>((*v)[0]), static_cast<int>((*v)[1])};
}

CivilDate require_date(std::string_view text, std::string_view key) {
  auto d = parse_date(text);
  if (!d) throw ConfigError("calendar key '" + std::string(key) + "': bad date '" + std::string(text) + "'");
  return *d;
}

}  // namespace

std::optional<double> TripRecord::duration_minutes() const {
  if (!alight_time) return std::nullopt;
  return static_cast<double>(alight_time->minutes() - board_time.minutes());
}

void ParseReport::reject(const std::filesystem::path& file, std::size_t line,
                         std::string_view reason) {
  ++malformed;
  if (diagnostics.size() < kMaxDiagnostics) {
    diagnostics.push_back(file.string() + ":" + std::to_string(line) + ": " + std::string(reason));
  }
}

Parsed<TripRecord> parse_trips(const std::filesystem::path& file, const TripSchema& schema) {
  CsvReader reader(file);
  const auto c_card = reader.require_column(schema.card_id);
  const auto c_journey = reader.require_column(schema.journey_id);
  const auto c_route = reader.require_column(schema.route_id);
  const auto c_board = reader.require_column(schema.board_stop);
  const auto c_alight = reader.require_column(schema.alight_stop);
  const auto c_btime = reader.require_column(schema.board_time);
  const auto c_atime = reader.require_column(schema.alight_time);
  const std::size_t width = reader.header().size();

  Parsed<TripRecord> out;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    ++out.report.rows;
    if (f.size() < width) {
      out.report.reject(file, reader.line_number(), "expected " + std::to_string(width) +
                                                        " fields, found " + std::to_string(f.size()));
      continue;
    }
    if (f[c_board].empty()) {
      out.report.reject(file, reader.line_number(), "column '" + schema.board_stop + "' is empty");
      continue;
    }
    auto board_time = parse_timestamp(f[c_btime]);
    if (!board_time) {
      out.report.reject(file, reader.line_number(), "column '" + schema.board_time + "': bad timestamp");
      continue;
    }
    std::optional<Timestamp> alight_time;
    if (!f[c_atime].empty()) {
      alight_time = parse_timestamp(f[c_atime]);
      if (!alight_time) {
        out.report.reject(file, reader.line_number(), "column '" + schema.alight_time + "': bad timestamp");
        continue;
      }
    }
    TripRecord t;
    t.card_id = f[c_card];
    t.journey_id = f[c_journey];
    t.route_id = f[c_route];
    t.board_stop = f[c_board];
    if (!f[c_alight].empty()) t.alight_stop = std::string(f[c_alight]);
    t.board_time = *board_time;
    t.alight_time = alight_time;
    out.records.push_back(std::move(t));
  }
  return out;
}

CleanResult clean_trips(std::span<const TripRecord> trips,
                        const std::unordered_set<std::string>& stops) {
  if (stops.empty()) throw std::invalid_argument("clean_trips: stop set is empty");
  CleanResult result;
  result.report.input = trips.size();
  for (const auto& t : trips) {
    if (!stops.contains(t.board_stop)) {
      ++result.report.ungeocodable;
      continue;
    }
    if (auto d = t.duration_minutes()) {
      if (*d < 0.0) {
        ++result.report.negative_duration;
        continue;
      }
      if (*d > kMaxTripMinutes) {
        ++result.report.overlong;
        continue;
      }
    }
    result.kept.push_back(t);
  }
  result.report.kept = result.kept.size();
  return result;
}

std::vector<TripRecord> filter_window(std::span<const TripRecord> trips, Timestamp origin,
                                      std::int64_t hours) {
  const Timestamp end = origin.plus_hours(hours);
  std::vector<TripRecord> out;
  for (const auto& t : trips) {
    if (t.board_time >= origin && t.board_time < end) out.push_back(t);
  }
  return out;
}

StopHourCounts::StopHourCounts(std::vector<std::string> stop_ids, Timestamp origin,
                               std::int64_t hours)
    : stop_ids_(std::move(stop_ids)), origin_(origin), hours_(hours) {
  if (hours < 0) throw std::invalid_argument("StopHourCounts: negative hour span");
  counts_.assign(stop_ids_.size() * static_cast<std::size_t>(hours_), 0);
}

std::optional<std::size_t> StopHourCounts::stop_index(std::string_view stop_id) const {
  for (std::size_t i = 0; i < stop_ids_.size(); ++i) {
    if (stop_ids_[i] == stop_id) return i;
  }
  return std::nullopt;
}

std::uint64_t StopHourCounts::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

StopHourCounts aggregate_ridership(std::span<const TripRecord> trips,
                                   std::span<const std::string> stops, Timestamp origin,
                                   std::int64_t hours) {
  StopHourCounts counts(std::vector<std::string>(stops.begin(), stops.end()), origin, hours);
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < stops.size(); ++i) index.emplace(stops[i], i);
  for (const auto& t : trips) {
    auto it = index.find(t.board_stop);
    if (it == index.end()) {
      throw DataError("aggregate_ridership: trip boards at unknown stop '" + t.board_stop + "'");
    }
    const auto h = hours_between(origin, t.board_time);
    if (h < 0 || h >= hours) {
      throw DataError("aggregate_ridership: trip at " + format_timestamp(t.board_time) +
                      " lies outside the panel window");
    }
    ++counts.at(it->second, h);
  }
  return counts;
}

Parsed<WeatherReading> parse_weather(const std::filesystem::path& file) {
  CsvReader reader(file);
  const auto c_time = reader.require_column("time");
  const auto c_t = reader.require_column("temperature");
  const auto c_h = reader.require_column("humidity");
  const auto c_ws = reader.require_column("wind_speed");
  const auto c_rf = reader.require_column("rainfall");
  const std::size_t width = reader.header().size();

  Parsed<WeatherReading> out;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    ++out.report.rows;
    if (f.size() < width) {
      out.report.reject(file, reader.line_number(), "short row");
      continue;
    }
    auto time = parse_timestamp(f[c_time]);
    auto t = parse_double(f[c_t]);
    auto h = parse_double(f[c_h]);
    auto ws = parse_double(f[c_ws]);
    auto rf = parse_double(f[c_rf]);
    if (!time || !t || !h || !ws || !rf) {
      out.report.reject(file, reader.line_number(), "unparsable field");
      continue;
    }
    if (*h < 0.0 || *h > 100.0 || *ws < 0.0 || *rf < 0.0 || !std::isfinite(*t)) {
      out.report.reject(file, reader.line_number(), "value out of range");
      continue;
    }
    out.records.push_back(WeatherReading{*time, *t, *h, *ws, *rf});
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  return out;
}

std::vector<HourlyWeather> hourly_weather(std::span<const WeatherReading> readings,
                                          Timestamp origin, std::int64_t hours) {
  if (readings.empty()) throw DataError("hourly_weather: no weather readings");
  if (hours <= 0) throw std::invalid_argument("hourly_weather: hour span must be positive");
  const auto n = static_cast<std::size_t>(hours);
  std::vector<HourlyWeather> out(n);
  std::vector<std::size_t> seen(n, 0);
  for (const auto& r : readings) {
    const auto h = hours_between(origin, r.time);
    if (h < 0 || h >= hours) continue;
    auto& w = out[static_cast<std::size_t>(h)];
    w.temperature += r.temperature;
    w.humidity += r.humidity;
    w.wind_speed += r.wind_speed;
    w.rainfall += r.rainfall;
    ++seen[static_cast<std::size_t>(h)];
  }
  std::vector<std::size_t> observed;
  for (std::size_t h = 0; h < n; ++h) {
    out[h].hour_index = static_cast<std::int64_t>(h);
    if (seen[h] == 0) continue;
    const auto k = static_cast<double>(seen[h]);
    out[h].temperature /= k;
    out[h].humidity /= k;
    out[h].wind_speed /= k;
    observed.push_back(h);
  }
  if (observed.empty()) throw DataError("hourly_weather: no readings inside the panel window");

  std::size_t next = 0;  // index into observed of the first observed hour >= h
  for (std::size_t h = 0; h < n; ++h) {
    while (next < observed.size() && observed[next] < h) ++next;
    if (next < observed.size() && observed[next] == h) continue;
    auto& w = out[h];
    w.interpolated = true;
    w.rainfall = 0.0;
    const HourlyWeather* lo = next > 0 ? &out[observed[next - 1]] : nullptr;
    const HourlyWeather* hi = next < observed.size() ? &out[observed[next]] : nullptr;
    if (lo && hi) {
      const double frac = static_cast<double>(h - observed[next - 1]) /
                          static_cast<double>(observed[next] - observed[next - 1]);
      w.temperature = lo->temperature + frac * (hi->temperature - lo->temperature);
      w.humidity = lo->humidity + frac * (hi->humidity - lo->humidity);
      w.wind_speed = lo->wind_speed + frac * (hi->wind_speed - lo->wind_speed);
    } else {
      const HourlyWeather* src = lo ? lo : hi;
      w.temperature = src->temperature;
      w.humidity = src->humidity;
      w.wind_speed = src->wind_speed;
    }
  }
  for (auto& w : out) {
    if (!(w.rainfall > 0.0)) w.rainfall = 0.0;  // also folds -0.0
    w.apparent_temperature = apparent_temperature(w.temperature, w.humidity, w.wind_speed);
  }
  return out;
}

bool CalendarConfig::is_school_holiday(const CivilDate& d) const {
  return std::any_of(school_holidays.begin(), school_holidays.end(),
                     [&](const DateRange& r) { return r.first <= d && d <= r.last; });
}

void CalendarConfig::validate() const {
  for (const auto* r : {&am_peak, &pm_peak, &weekend_peak, &night_hours}) {
    if (r->first < 0 || r->first > 23 || r->last < 0 || r->last > 23) {
      throw ConfigError("calendar: hour ranges must lie within 0-23");
    }
  }
  for (const auto& r : school_holidays) {
    if (r.last < r.first) throw ConfigError("calendar: school holiday range ends before it starts");
  }
}

CalendarConfig load_calendar(const KvConfig& config) {
  CalendarConfig cal;
  if (auto v = config.strings("calendar.public_holidays")) {
    for (const auto& s : *v) cal.public_holidays.insert(require_date(s, "public_holidays"));
  }
  if (auto v = config.strings("calendar.flexible_dev_days")) {
    for (const auto& s : *v) cal.flexible_dev_days.insert(require_date(s, "flexible_dev_days"));
  }
  if (auto v = config.strings("calendar.school_holidays")) {
    for (const auto& s : *v) {
      const auto dots = s.find("..");
      if (dots == std::string::npos) {
        const auto d = require_date(s, "school_holidays");
        cal.school_holidays.push_back({d, d});
      } else {
        cal.school_holidays.push_back({require_date(s.substr(0, dots), "school_holidays"),
                                       require_date(s.substr(dots + 2), "school_holidays")});
      }
    }
  }
  cal.am_peak = hour_range(config, "calendar.am_peak", cal.am_peak);
  cal.pm_peak = hour_range(config, "calendar.pm_peak", cal.pm_peak);
  cal.weekend_peak = hour_range(config, "calendar.weekend_peak", cal.weekend_peak);
  cal.night_hours = hour_range(config, "calendar.night_hours", cal.night_hours);
  cal.validate();
  return cal;
}

bool ServiceWindow::covers(int iso_weekday, int hour) const {
  const auto& day = by_weekday.at(static_cast<std::size_t>(iso_weekday - 1));
  return std::any_of(day.begin(), day.end(), [hour](const ServiceInterval& iv) {
    return hour >= iv.start_hour && hour < iv.end_hour;
  });
}

void ServiceWindow::validate() const {
  for (std::size_t d = 0; d < 7; ++d) {
    auto day = by_weekday[d];
    std::sort(day.begin(), day.end(),
              [](const auto& a, const auto& b) { return a.start_hour < b.start_hour; });
    for (std::size_t i = 0; i < day.size(); ++i) {
      const auto& iv = day[i];
      if (iv.start_hour < 0 || iv.end_hour > 24 || iv.start_hour >= iv.end_hour) {
        throw DataError("service window for stop '" + stop_id + "': bad interval [" +
                        std::to_string(iv.start_hour) + ", " + std::to_string(iv.end_hour) + ")");
      }
      if (i > 0 && day[i - 1].end_hour > iv.start_hour) {
        throw DataError("service window for stop '" + stop_id + "': overlapping intervals on weekday " +
                        std::to_string(d + 1));
      }
    }
  }
}

std::vector<ServiceWindow> parse_service_windows(const std::filesystem::path& file) {
  CsvReader reader(file);
  const auto c_stop = reader.require_column("stop_id");
  const auto c_day = reader.require_column("weekday");
  const auto c_start = reader.require_column("start_hour");
  const auto c_end = reader.require_column("end_hour");
  std::vector<ServiceWindow> windows;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    auto day = parse_integer(f.size() > c_day ? f[c_day] : "");
    auto start = parse_integer(f.size() > c_start ? f[c_start] : "");
    auto end = parse_integer(f.size() > c_end ? f[c_end] : "");
    if (f.size() <= c_stop || f[c_stop].empty() || !day || !start || !end || *day < 1 || *day > 7) {
      throw DataError(file.string() + ":" + std::to_string(reader.line_number()) +
                      ": malformed service window row");
    }
    const std::string id(f[c_stop]);
    auto [it, inserted] = index.emplace(id, windows.size());
    if (inserted) windows.push_back(ServiceWindow{id, {}});
    windows[it->second].by_weekday[static_cast<std::size_t>(*day - 1)].push_back(
        ServiceInterval{static_cast<int>(*start), static_cast<int>(*end)});
  }
  for (const auto& w : windows) w.validate();
  return windows;
}

std::vector<StopSite> parse_stops(const std::filesystem::path& file) {
  CsvReader reader(file);
  const auto c_id = reader.require_column("stop_id");
  const auto c_lon = reader.require_column("lon");
  const auto c_lat = reader.require_column("lat");
  const auto c_bw = reader.column("busway");
  std::vector<StopSite> stops;
  std::unordered_set<std::string> seen;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const auto where = file.string() + ":" + std::to_string(reader.line_number());
    if (f.size() < reader.header().size()) throw DataError(where + ": short row");
    auto lon = parse_double(f[c_lon]);
    auto lat = parse_double(f[c_lat]);
    if (f[c_id].empty() || !lon || !lat || std::fabs(*lat) > 90.0 || std::fabs(*lon) > 180.0) {
      throw DataError(where + ": malformed stop row");
    }
    StopSite s{std::string(f[c_id]), LonLat{*lon, *lat}, false};
    if (c_bw) {
      auto bw = parse_integer(f[*c_bw]);
      if (!bw || (*bw != 0 && *bw != 1)) throw DataError(where + ": busway must be 0 or 1");
      s.busway = *bw == 1;
    }
    if (!seen.insert(s.stop_id).second) throw DataError(where + ": duplicate stop_id " + s.stop_id);
    stops.push_back(std::move(s));
  }
  return stops;
}

std::string_view amenity_name(AmenityCategory c) { return kAmenityNames[static_cast<std::size_t>(c)]; }

std::string_view amenity_code(AmenityCategory c) { return kAmenityCodes[static_cast<std::size_t>(c)]; }

std::optional<AmenityCategory> parse_amenity_category(std::string_view text) {
  const auto t = lower(trim(text));
  for (std::size_t i = 0; i < kAmenityCategoryCount; ++i) {
    if (t == kAmenityNames[i] || t == lower(kAmenityCodes[i])) return static_cast<AmenityCategory>(i);
  }
  return std::nullopt;
}

Parsed<std::pair<AmenityCategory, LonLat>> parse_amenities(const std::filesystem::path& file) {
  CsvReader reader(file);
  const auto c_cat = reader.require_column("category");
  const auto c_lon = reader.require_column("lon");
  const auto c_lat = reader.require_column("lat");
  Parsed<std::pair<AmenityCategory, LonLat>> out;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    ++out.report.rows;
    if (f.size() < reader.header().size()) {
      out.report.reject(file, reader.line_number(), "short row");
      continue;
    }
    auto cat = parse_amenity_category(f[c_cat]);
    auto lon = parse_double(f[c_lon]);
    auto lat = parse_double(f[c_lat]);
    if (!cat || !lon || !lat) {
      out.report.reject(file, reader.line_number(), "unknown category or bad coordinate");
      continue;
    }
    out.records.emplace_back(*cat, LonLat{*lon, *lat});
  }
  return out;
}

AmenityPoints group_amenities(std::span<const std::pair<AmenityCategory, LonLat>> points) {
  AmenityPoints grouped;
  for (const auto& [cat, p] : points) grouped[static_cast<std::size_t>(cat)].push_back(p);
  return grouped;
}

void GeographyConfig::validate() const {
  if (!(ring_radii[0] > 0.0 && ring_radii[0] < ring_radii[1] && ring_radii[1] < ring_radii[2])) {
    throw ConfigError("geography: ring radii must be positive and strictly increasing");
  }
}

GeographyConfig load_geography(const KvConfig& config) {
  GeographyConfig geo;
  if (auto v = config.numbers("geography.cbd")) {
    if (v->size() != 2) throw ConfigError("geography.cbd needs [lon, lat]");
    geo.cbd = LonLat{(*v)[0], (*v)[1]};
  }
  if (auto v = config.numbers("geography.ring_radii")) {
    if (v->size() != 3) throw ConfigError("geography.ring_radii needs three radii");
    geo.ring_radii = {(*v)[0], (*v)[1], (*v)[2]};
  }
  geo.validate();
  return geo;
}

std::optional<PanelWindow> load_panel_window(const KvConfig& config) {
  auto origin = config.string("panel.origin");
  if (!origin) return std::nullopt;
  auto t = parse_timestamp(*origin);
  if (!t) throw ConfigError("panel.origin: bad timestamp '" + *origin + "'");
  const auto hours = config.number("panel.hours");
  if (!hours || *hours < 1) throw ConfigError("panel.hours must be a positive count");
  return PanelWindow{*t, static_cast<std::int64_t>(*hours)};
}

}  // namespace stormrider
