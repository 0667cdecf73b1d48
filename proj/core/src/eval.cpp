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

#include "stormrider/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "stormrider/errors.hpp"

namespace stormrider::eval {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Accumulator {
  LonLat position;
  double sum = 0.0;
  std::size_t count = 0;
};

StopErrors group_by_stop(std::span<const PredictionRecord> predictions, auto&& keep) {
  std::map<std::string, Accumulator, std::less<>> acc;
  for (const auto& p : predictions) {
    auto& a = acc[p.stop_id];
    a.position = p.position;
    if (keep(p)) {
      a.sum += p.residual;
      ++a.count;
    }
  }
  StopErrors out;
  for (const auto& [id, a] : acc) {
    if (a.count == 0) {
      out.omitted.push_back(id);
    } else {
      out.stops.push_back({id, a.position, a.sum / static_cast<double>(a.count), a.count});
    }
  }
  if (!out.omitted.empty()) {
    out.warnings.push_back(std::to_string(out.omitted.size()) + " stop(s) have no records after filtering");
  }
  return out;
}

}  // namespace

PredictionRecord make_record(std::string stop_id, std::int64_t hour_index, LonLat position, double observed,
                             double predicted) {
  return {std::move(stop_id), hour_index, position, observed, predicted, predicted - observed};
}

// ---------------------------------------------------------------------------

const std::array<std::string_view, kBucketCount>& bucket_labels() {
  static const std::array<std::string_view, kBucketCount> labels{
      "<-100", "-100..-51", "-50..-23", "-22..-1", "0", "1..22", "23..50", "51..100", ">100"};
  return labels;
}

std::size_t bucket_of(long long r) {
  if (r < -100) return 0;
  if (r <= -51) return 1;
  if (r <= -23) return 2;
  if (r <= -1) return 3;
  if (r == 0) return 4;
  if (r <= 22) return 5;
  if (r <= 50) return 6;
  if (r <= 100) return 7;
  return 8;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
}

MetricsReport metrics(std::span<const PredictionRecord> predictions) {
  if (predictions.empty()) throw std::invalid_argument("metrics: no predictions");
  MetricsReport m;
  const std::size_t n = predictions.size();
  m.count = n;
  const auto dn = static_cast<double>(n);

  double sse = 0.0, mean_o = 0.0, mean_p = 0.0;
  std::array<std::size_t, kBucketCount> counts{};
  std::size_t within = 0;
  std::vector<double> residuals;
  residuals.reserve(n);
  for (const auto& p : predictions) {
    sse += p.residual * p.residual;
    mean_o += p.observed;
    mean_p += p.predicted;
    residuals.push_back(p.residual);
    const auto r = static_cast<long long>(std::round(p.residual));
    ++counts[bucket_of(r)];
    if (r >= -22 && r <= 22) ++within;
  }
  m.rmse = std::sqrt(sse / dn);
  mean_o /= dn;
  mean_p /= dn;
  for (std::size_t b = 0; b < kBucketCount; ++b) m.bucket_percent[b] = 100.0 * static_cast<double>(counts[b]) / dn;
  m.within_band_fraction = static_cast<double>(within) / dn;

  double soo = 0.0, spp = 0.0, sop = 0.0;
  for (const auto& p : predictions) {
    const double a = p.observed - mean_o;
    const double b = p.predicted - mean_p;
    soo += a * a;
    spp += b * b;
    sop += a * b;
  }
  if (soo > 0.0 && spp > 0.0) m.pearson = std::clamp(sop / std::sqrt(soo * spp), -1.0, 1.0);

  std::sort(residuals.begin(), residuals.end());
  auto q = [&](double level) {
    const double pos = level * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? residuals[lo] : residuals[lo] + frac * (residuals[hi] - residuals[lo]);
  };
  m.q1 = q(0.25);
  m.median = q(0.5);
  m.q3 = q(0.75);
  return m;
}

// ---------------------------------------------------------------------------

std::vector<HourlyError> hourly_mean_error(std::span<const PredictionRecord> predictions) {
  std::map<std::int64_t, std::pair<double, std::size_t>> acc;
  for (const auto& p : predictions) {
    auto& a = acc[p.hour_index];
    a.first += p.residual;
    ++a.second;
  }
  std::vector<HourlyError> out;
  out.reserve(acc.size());
  for (const auto& [h, a] : acc) out.push_back({h, a.first / static_cast<double>(a.second), a.second});
  return out;
}

std::string_view to_string(TimeFilter f) {
  switch (f) {
    case TimeFilter::kAll: return "all";
    case TimeFilter::kPeak: return "peak";
    case TimeFilter::kOffPeak: return "offpeak";
    case TimeFilter::kWeekday: return "weekday";
    case TimeFilter::kWeekend: return "weekend";
  }
  return "all";
}

TimeFilter parse_time_filter(std::string_view text) {
  const std::string t = lower(text);
  for (const auto f : {TimeFilter::kAll, TimeFilter::kPeak, TimeFilter::kOffPeak, TimeFilter::kWeekday,
                       TimeFilter::kWeekend}) {
    if (t == to_string(f)) return f;
  }
  if (t == "off-peak") return TimeFilter::kOffPeak;
  throw ConfigError("unknown time filter '" + std::string(text) + "' (all, peak, offpeak, weekday, weekend)");
}

StopErrors stop_mean_error(std::span<const PredictionRecord> predictions, TimeFilter filter,
                           const CalendarConfig& calendar, Timestamp origin) {
  std::unordered_map<std::int64_t, bool> cache;
  auto passes = [&](const PredictionRecord& p) {
    if (filter == TimeFilter::kAll) return true;
    auto it = cache.find(p.hour_index);
    if (it != cache.end()) return it->second;
    const CalendarFeatures c = calendar_features(p.hour_index, origin, calendar);
    bool keep = true;
    switch (filter) {
      case TimeFilter::kPeak: keep = is_peak(c); break;
      case TimeFilter::kOffPeak: keep = !is_peak(c); break;
      case TimeFilter::kWeekday: keep = !c.weekend; break;
      case TimeFilter::kWeekend: keep = c.weekend; break;
      case TimeFilter::kAll: break;
    }
    cache.emplace(p.hour_index, keep);
    return keep;
  };
  return group_by_stop(predictions, passes);
}

// ---------------------------------------------------------------------------

std::string_view to_string(WeatherVariable v) {
  switch (v) {
    case WeatherVariable::kTemperature: return "temperature";
    case WeatherVariable::kHumidity: return "humidity";
    case WeatherVariable::kWindSpeed: return "wind_speed";
    case WeatherVariable::kApparentTemperature: return "apparent_temperature";
    case WeatherVariable::kRainfall: return "rainfall";
  }
  return "temperature";
}

WeatherVariable parse_weather_variable(std::string_view text) {
  static constexpr std::array<std::string_view, kWeatherVariableCount> kCodes{"t", "h", "ws", "at", "rf"};
  const std::string t = lower(text);
  for (std::size_t i = 0; i < kWeatherVariableCount; ++i) {
    const auto v = static_cast<WeatherVariable>(i);
    if (t == to_string(v) || t == kCodes[i]) return v;
  }
  if (t == "wind" || t == "windspeed") return WeatherVariable::kWindSpeed;
  if (t == "rain") return WeatherVariable::kRainfall;
  throw ConfigError("unknown weather variable '" + std::string(text) + "'");
}

double weather_value(const HourlyWeather& w, WeatherVariable v) {
  switch (v) {
    case WeatherVariable::kTemperature: return w.temperature;
    case WeatherVariable::kHumidity: return w.humidity;
    case WeatherVariable::kWindSpeed: return w.wind_speed;
    case WeatherVariable::kApparentTemperature: return w.apparent_temperature;
    case WeatherVariable::kRainfall: return w.rainfall;
  }
  return 0.0;
}

bool ExtremeWeatherMask::extreme(WeatherVariable v, std::int64_t hour) const {
  const auto i = static_cast<std::size_t>(v);
  const auto h = static_cast<std::size_t>(hour);
  return high[i].at(h) != 0 || low[i].at(h) != 0;
}

std::vector<std::uint8_t> ExtremeWeatherMask::flags(WeatherVariable v) const {
  const auto i = static_cast<std::size_t>(v);
  std::vector<std::uint8_t> out(high[i].size());
  for (std::size_t h = 0; h < out.size(); ++h) out[h] = (high[i][h] | low[i][h]) != 0;
  return out;
}

ExtremeWeatherMask extreme_mask(std::span<const HourlyWeather> weather, const ExtremeOptions& options) {
  if (weather.size() < 2) throw std::invalid_argument("extreme_mask: need at least 2 hours of weather");
  std::size_t first = 0, last = weather.size();
  if (options.reference_hours) {
    first = static_cast<std::size_t>(std::max<std::int64_t>(0, options.reference_hours->first));
    last = static_cast<std::size_t>(std::min<std::int64_t>(static_cast<std::int64_t>(weather.size()),
                                                           options.reference_hours->second));
    if (last < first + 2) throw std::invalid_argument("extreme_mask: reference span shorter than 2 hours");
  }
  ExtremeWeatherMask mask;
  mask.hours = static_cast<std::int64_t>(weather.size());
  for (std::size_t vi = 0; vi < kWeatherVariableCount; ++vi) {
    const auto v = static_cast<WeatherVariable>(vi);
    auto& high = mask.high[vi];
    auto& low = mask.low[vi];
    high.assign(weather.size(), 0);
    low.assign(weather.size(), 0);
    if (v == WeatherVariable::kRainfall) {
      mask.lower_threshold[vi] = kNaN;
      mask.upper_threshold[vi] = options.rain_threshold_mm;
      for (std::size_t h = 0; h < weather.size(); ++h) high[h] = weather[h].rainfall > options.rain_threshold_mm;
      continue;
    }
    double lo_v = std::numeric_limits<double>::infinity(), hi_v = -lo_v;
    double sum = 0.0;
    for (std::size_t h = first; h < last; ++h) {
      const double x = weather_value(weather[h], v);
      sum += x;
      lo_v = std::min(lo_v, x);
      hi_v = std::max(hi_v, x);
    }
    const auto n = static_cast<double>(last - first);
    double mean = sum / n;
    double correction = 0.0;
    for (std::size_t h = first; h < last; ++h) correction += weather_value(weather[h], v) - mean;
    mean += correction / n;
    double ss = 0.0;
    for (std::size_t h = first; h < last; ++h) {
      const double d = weather_value(weather[h], v) - mean;
      ss += d * d;
    }
    const double sd = lo_v == hi_v ? 0.0 : std::sqrt(ss / (options.sample_sd ? n - 1.0 : n));
    mask.lower_threshold[vi] = mean - options.sd_multiplier * sd;
    mask.upper_threshold[vi] = mean + options.sd_multiplier * sd;
    if (sd == 0.0) continue;
    for (std::size_t h = 0; h < weather.size(); ++h) {
      const double x = weather_value(weather[h], v);
      high[h] = x > mask.upper_threshold[vi];
      low[h] = x < mask.lower_threshold[vi];
    }
  }
  return mask;
}

StopErrors extreme_stop_error(std::span<const PredictionRecord> predictions, const ExtremeWeatherMask& mask,
                              WeatherVariable variable, ExtremeSide side) {
  const auto vi = static_cast<std::size_t>(variable);
  const auto& high = mask.high[vi];
  const auto& low = mask.low[vi];
  auto flagged = [&](std::int64_t hour) {
    if (hour < 0 || hour >= mask.hours) throw std::out_of_range("extreme_stop_error: prediction hour outside the mask");
    const auto h = static_cast<std::size_t>(hour);
    switch (side) {
      case ExtremeSide::kHigh: return high[h] != 0;
      case ExtremeSide::kLow: return low[h] != 0;
      case ExtremeSide::kBoth: break;
    }
    return high[h] != 0 || low[h] != 0;
  };
  bool any = false;
  for (const auto& p : predictions) any = any || flagged(p.hour_index);
  if (!any) {
    StopErrors empty;
    empty.warnings.push_back("no extreme " + std::string(to_string(variable)) + " hours among the predictions");
    return empty;
  }
  return group_by_stop(predictions, [&](const PredictionRecord& p) { return flagged(p.hour_index); });
}

std::vector<WeatherBin> error_vs_weather(std::span<const PredictionRecord> predictions,
                                         std::span<const HourlyWeather> weather, WeatherVariable variable,
                                         int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("error_vs_weather: need at least 2 bins");
  std::vector<double> values;
  values.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (p.hour_index < 0 || static_cast<std::size_t>(p.hour_index) >= weather.size())
      throw std::out_of_range("error_vs_weather: prediction hour outside the weather span");
    values.push_back(weather_value(weather[static_cast<std::size_t>(p.hour_index)], variable));
  }
  std::vector<WeatherBin> bins(static_cast<std::size_t>(n_bins));
  if (values.empty()) {
    for (auto& b : bins) b.mean_residual = kNaN;
    return bins;
  }
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx;
  const double width = (hi - lo) / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    bins[static_cast<std::size_t>(b)].lower = lo + width * b;
    bins[static_cast<std::size_t>(b)].upper = b + 1 == n_bins ? hi : lo + width * (b + 1);
  }
  std::vector<double> sums(bins.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = std::min(bins.size() - 1, static_cast<std::size_t>(std::floor((values[i] - lo) / width)));
    }
    sums[b] += predictions[i].residual;
    ++bins[b].count;
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].mean_residual = bins[b].count > 0 ? sums[b] / static_cast<double>(bins[b].count) : kNaN;
  }
  return bins;
}

RidershipDifferences extreme_vs_normal_diff(const StopHourCounts& counts, std::span<const std::uint8_t> extreme_hours,
                                            std::int64_t first_hour) {
  if (extreme_hours.size() < static_cast<std::size_t>(counts.hours()))
    throw std::invalid_argument("extreme_vs_normal_diff: mask shorter than the count span");
  RidershipDifferences out;
  for (std::size_t s = 0; s < counts.stop_count(); ++s) {
    double se = 0.0, sn = 0.0;
    std::size_t ne = 0, nn = 0;
    for (std::int64_t h = std::max<std::int64_t>(0, first_hour); h < counts.hours(); ++h) {
      const double c = counts.at(s, h);
      if (extreme_hours[static_cast<std::size_t>(h)]) {
        se += c;
        ++ne;
      } else {
        sn += c;
        ++nn;
      }
    }
    if (ne == 0 || nn == 0) {
      out.omitted.push_back(counts.stop_ids()[s]);
      continue;
    }
    const double me = se / static_cast<double>(ne);
    const double mn = sn / static_cast<double>(nn);
    out.stops.push_back({counts.stop_ids()[s], me, mn, me - mn});
  }
  if (!out.omitted.empty()) {
    out.warnings.push_back(std::to_string(out.omitted.size()) +
                           " stop(s) lack extreme or normal hours; no difference reported");
  }
  return out;
}

RidershipDifferences extreme_vs_normal_diff(const StopHourCounts& counts, const ExtremeWeatherMask& mask,
                                            WeatherVariable variable, std::int64_t first_hour) {
  return extreme_vs_normal_diff(counts, mask.flags(variable), first_hour);
}

// ---------------------------------------------------------------------------

BoundingBox bounding_box(std::span<const ValuePoint> points, double margin) {
  if (points.empty()) throw std::invalid_argument("bounding_box: no points");
  BoundingBox b{points[0].position.lon, points[0].position.lat, points[0].position.lon, points[0].position.lat};
  for (const auto& p : points) {
    b.min_lon = std::min(b.min_lon, p.position.lon);
    b.max_lon = std::max(b.max_lon, p.position.lon);
    b.min_lat = std::min(b.min_lat, p.position.lat);
    b.max_lat = std::max(b.max_lat, p.position.lat);
  }
  const double dx = std::max(b.max_lon - b.min_lon, 1e-4) * margin;
  const double dy = std::max(b.max_lat - b.min_lat, 1e-4) * margin;
  return {b.min_lon - dx, b.min_lat - dy, b.max_lon + dx, b.max_lat + dy};
}

LonLat ErrorSurfaceGrid::cell_centre(int col, int row) const {
  return {bbox.min_lon + (col + 0.5) * (bbox.max_lon - bbox.min_lon) / n_cols,
          bbox.min_lat + (row + 0.5) * (bbox.max_lat - bbox.min_lat) / n_rows};
}

ErrorSurfaceGrid idw_surface(std::span<const ValuePoint> points, const BoundingBox& bbox, int n_cols, int n_rows,
                             double power, double max_distance) {
  if (points.empty()) throw std::invalid_argument("idw_surface: no points");
  if (n_cols < 1 || n_rows < 1) throw std::invalid_argument("idw_surface: grid needs at least one cell");
  if (!(power > 0.0)) throw std::invalid_argument("idw_surface: power must be positive");
  if (!(bbox.max_lon >= bbox.min_lon && bbox.max_lat >= bbox.min_lat))
    throw std::invalid_argument("idw_surface: inverted bounding box");

  ErrorSurfaceGrid grid{bbox, n_cols, n_rows, std::vector<double>(static_cast<std::size_t>(n_cols) * static_cast<std::size_t>(n_rows))};
  double vmin = points[0].value, vmax = points[0].value;
  for (const auto& p : points) {
    vmin = std::min(vmin, p.value);
    vmax = std::max(vmax, p.value);
  }
  const auto cells = static_cast<std::ptrdiff_t>(grid.values.size());
#pragma omp parallel
  {
    std::vector<double> d(points.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < cells; ++ci) {
      const int row = static_cast<int>(ci / n_cols);
      const int col = static_cast<int>(ci % n_cols);
      const LonLat centre = grid.cell_centre(col, row);
      std::size_t nearest = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        d[i] = haversine(centre, points[i].position);
        if (d[i] < d[nearest]) nearest = i;
      }
      double value;
      if (d[nearest] < kExactHitMetres) {
        value = points[nearest].value;
      } else if (max_distance > 0.0 && d[nearest] > max_distance) {
        value = kNaN;
      } else {
        // Weights relative to the nearest point keep high powers finite.
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double w = std::pow(d[nearest] / d[i], power);
          num += w * points[i].value;
          den += w;
        }
        value = std::clamp(num / den, vmin, vmax);
      }
      grid.values[static_cast<std::size_t>(ci)] = value;
    }
  }
  return grid;
}

std::vector<ValuePoint> to_points(const StopErrors& errors) {
  std::vector<ValuePoint> out;
  out.reserve(errors.stops.size());
  for (const auto& s : errors.stops) out.push_back({s.position, s.mean_residual});
  return out;
}

}  // namespace stormrider::eval
