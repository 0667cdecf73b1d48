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

#include "stormrider/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/rng.hpp"

namespace stormrider::synth {
namespace {

// Stream tags keep the city, weather, demand and trip draws independent.
constexpr std::uint64_t kCityStream = 0x63697479;
constexpr std::uint64_t kWeatherStream = 0x77746872;
constexpr std::uint64_t kRideStream = 0x72696465;
constexpr std::uint64_t kTripStream = 0x74726970;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

LonLat polar(const LonLat& centre, double metres, double angle) {
  return offset_metres(centre, metres * std::cos(angle), metres * std::sin(angle));
}

int zone_of(const SyntheticCity& city, const LonLat& p) {
  const double d = haversine(city.geography.cbd, p);
  if (d < city.geography.ring_radii[0]) return 0;
  if (d < city.geography.ring_radii[1]) return 1;
  return 2;
}

std::string stop_name(std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i + 1);
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
  return "S" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

std::array<double, kWeatherFeatureCount> anomalies(const DemandSpec& d, const HourlyWeather& w) {
  const std::array<double, kWeatherFeatureCount> raw{w.temperature, w.humidity, w.wind_speed,
                                                     w.apparent_temperature, w.rainfall};
  std::array<double, kWeatherFeatureCount> out{};
  for (std::size_t k = 0; k < kWeatherFeatureCount; ++k) out[k] = (raw[k] - d.anomaly_reference[k]) / d.anomaly_scale[k];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// City

void CitySpec::validate() const {
  if (n_stops < 2) throw ConfigError("synth: a city needs at least 2 stops");
  if (!(ring_radii[0] > 0.0 && ring_radii[0] < ring_radii[1] && ring_radii[1] < ring_radii[2]))
    throw ConfigError("synth: ring radii must be positive and strictly increasing");
  if (!(busway_fraction >= 0.0 && busway_fraction <= 1.0))
    throw ConfigError("synth: busway_fraction must lie in [0, 1]");
  for (const double a : amenity_intensity) {
    if (!(a >= 0.0)) throw ConfigError("synth: amenity intensities must be non-negative");
  }
}

SyntheticCity gen_city(const CitySpec& spec) {
  spec.validate();
  Rng rng(spec.seed, kCityStream);
  SyntheticCity city;
  city.geography.cbd = spec.cbd_center;
  city.geography.ring_radii = spec.ring_radii;
  const auto& r = spec.ring_radii;

  city.activity_centres.push_back(spec.cbd_center);
  for (std::size_t i = 0; i < spec.activity_centres; ++i) {
    const double d = rng.uniform(r[0] * 1.5, std::max(r[0] * 1.5, r[2] * 0.6));
    city.activity_centres.push_back(polar(spec.cbd_center, d, rng.uniform(0.0, kTwoPi)));
  }

  // Busway corridors run radially out of the CBD.
  const std::array<double, 3> corridor{rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi)};
  const auto n_busway = static_cast<std::size_t>(std::llround(spec.busway_fraction * static_cast<double>(spec.n_stops)));
  std::vector<StopSite> sites(spec.n_stops);
  for (std::size_t i = 0; i < spec.n_stops; ++i) {
    auto& site = sites[i];
    if (i < n_busway) {
      const double along = rng.uniform(300.0, r[2] * 0.75);
      const double angle = corridor[i % corridor.size()];
      const LonLat on_line = polar(spec.cbd_center, along, angle);
      site.position = polar(on_line, rng.normal(0.0, 40.0), angle + std::numbers::pi / 2.0);
      site.busway = true;
    } else {
      const double u = rng.uniform();
      const double lo = u < 0.05 ? 0.0 : (u < 0.5 ? r[0] : r[1]);
      const double hi = u < 0.05 ? r[0] : (u < 0.5 ? r[1] : r[2]);
      const double d = std::sqrt(rng.uniform(lo * lo, hi * hi));
      site.position = polar(spec.cbd_center, d, rng.uniform(0.0, kTwoPi));
    }
  }
  rng.shuffle(std::span<StopSite>(sites));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    sites[i].stop_id = stop_name(i, sites.size());
    sites[i].position.lon = round_to(sites[i].position.lon, 1e-6);
    sites[i].position.lat = round_to(sites[i].position.lat, 1e-6);
  }
  city.stops = std::move(sites);

  for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
    auto& points = city.amenities[c];
    for (std::size_t a = 0; a < city.activity_centres.size(); ++a) {
      const double weight = a == 0 ? 3.0 : 1.0;
      const auto n = rng.poisson(spec.amenity_intensity[c] * weight);
      for (std::uint64_t k = 0; k < n; ++k) {
        points.push_back(offset_metres(city.activity_centres[a], rng.normal(0.0, 700.0), rng.normal(0.0, 700.0)));
      }
    }
    const auto background = rng.poisson(spec.amenity_intensity[c] * 1.5);
    for (std::uint64_t k = 0; k < background; ++k) {
      points.push_back(polar(spec.cbd_center, r[2] * std::sqrt(rng.uniform()), rng.uniform(0.0, kTwoPi)));
    }
    for (auto& p : points) p = {round_to(p.lon, 1e-6), round_to(p.lat, 1e-6)};
  }

  std::vector<LonLat> positions;
  for (const auto& s : city.stops) positions.push_back(s.position);
  const AmenityDensity density = amenity_density(positions, city.amenities);

  constexpr std::array<double, 3> kZoneEffect{2.2, 1.2, 0.7};
  for (std::size_t i = 0; i < city.stops.size(); ++i) {
    const auto& s = city.stops[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : city.activity_centres) nearest = std::min(nearest, haversine(c, s.position));
    city.stop_class.push_back(nearest < 1'500.0 ? StopClass::kDiscretionary : StopClass::kCommuter);

    double mean_density = 0.0;
    for (const double v : density.normalized[i]) mean_density += v;
    mean_density /= static_cast<double>(kAmenityCategoryCount);
    const int zone = zone_of(city, s.position);
    const double effect = kZoneEffect[static_cast<std::size_t>(zone)] * (s.busway ? 1.8 : 1.0) *
                          std::exp(0.8 * mean_density) * rng.lognormal(0.0, 0.25);
    city.stop_effect.push_back(effect);

    ServiceWindow w;
    w.stop_id = s.stop_id;
    const bool outer = zone == 2 && !s.busway;
    for (int d = 0; d < 5; ++d) w.by_weekday[static_cast<std::size_t>(d)] = {outer ? ServiceInterval{6, 23} : ServiceInterval{5, 24}};
    w.by_weekday[5] = {outer ? ServiceInterval{7, 22} : ServiceInterval{6, 24}};
    w.by_weekday[6] = {outer ? ServiceInterval{8, 21} : ServiceInterval{7, 23}};
    city.service_windows.push_back(std::move(w));
  }
  return city;
}

// ---------------------------------------------------------------------------
// Weather

std::vector<WeatherReading> gen_weather(int days, Timestamp origin, std::uint64_t seed, const Climate& c) {
  if (days < 1) throw ConfigError("synth: weather needs at least one day");
  constexpr int kStepsPerDay = 288;
  const auto n = static_cast<std::size_t>(days) * kStepsPerDay;
  Rng rng(seed, kWeatherStream);

  // Rain intensity (mm/h) per 5-minute step from overlapping bursts.
  std::vector<double> rain_rate(n, 0.0);
  for (int d = 0; d < days; ++d) {
    const auto bursts = rng.poisson(c.rain_bursts_per_day);
    for (std::uint64_t b = 0; b < bursts; ++b) {
      const double start = (d + rng.uniform()) * kStepsPerDay;
      const double hours = std::clamp(rng.lognormal(std::log(c.burst_median_hours), 0.6), 0.5, 12.0);
      const double intensity = rng.gamma(1.5, c.burst_mean_intensity / 1.5);
      const auto first = static_cast<std::size_t>(start);
      const auto last = std::min(n, static_cast<std::size_t>(start + hours * 12.0) + 1);
      for (std::size_t i = first; i < last; ++i) rain_rate[i] += intensity;
    }
  }

  const double phi_t = 0.995, phi_h = 0.99, phi_w = 0.99;
  double ar_t = rng.normal(0.0, c.temperature_noise_sd);
  double ar_h = rng.normal(0.0, 6.0);
  double ar_w = rng.normal(0.0, c.wind_log_sd);
  std::vector<WeatherReading> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      ar_t = phi_t * ar_t + std::sqrt(1.0 - phi_t * phi_t) * rng.normal(0.0, c.temperature_noise_sd);
      ar_h = phi_h * ar_h + std::sqrt(1.0 - phi_h * phi_h) * rng.normal(0.0, 6.0);
      ar_w = phi_w * ar_w + std::sqrt(1.0 - phi_w * phi_w) * rng.normal(0.0, c.wind_log_sd);
    }
    const double day = static_cast<double>(i) / kStepsPerDay;
    const double hour = std::fmod(static_cast<double>(i) / 12.0, 24.0);
    const double wet = std::min(1.0, rain_rate[i] / 2.0);
    const double seasonal = c.mean_temperature + c.drift_per_day * day;
    const double t = seasonal + c.diurnal_amplitude * std::sin(kTwoPi * (hour - 9.0) / 24.0) + ar_t -
                     c.rain_cooling * wet;
    const double h = std::clamp(c.humidity_mean + c.humidity_per_degree * (t - seasonal) + 18.0 * wet + ar_h, 20.0, 100.0);
    const double ws = std::exp(std::log(c.wind_median) + ar_w) * (1.0 + 0.3 * wet);
    const double rf = rain_rate[i] > 0.0 ? rain_rate[i] / 12.0 * rng.gamma(4.0, 0.25) : 0.0;

    auto& w = out[i];
    w.time = origin.plus_minutes(static_cast<std::int64_t>(i) * 5);
    w.temperature = round_to(t, 0.01);
    w.humidity = round_to(h, 0.1);
    w.wind_speed = round_to(ws, 0.01);
    w.rainfall = round_to(rf, 0.01);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ridership

DemandSpec DemandSpec::defaults() {
  DemandSpec d;
  constexpr std::array<double, 24> kWeekday{0.05, 0.05, 0.05, 0.05, 0.1, 0.3, 0.9, 2.2, 2.0, 1.0, 0.8, 0.8,
                                            0.8,  0.8,  1.0,  1.8,  2.0, 1.9, 1.1, 0.7, 0.5, 0.4, 0.25, 0.15};
  constexpr std::array<double, 24> kWeekend{0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.2, 0.4, 0.6, 0.9, 0.9, 0.9,
                                            0.9,  0.9,  0.9,  0.9,  0.9,  0.9,  0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  for (std::size_t day = 0; day < 7; ++day) {
    const auto& shape = day < 5 ? kWeekday : kWeekend;
    for (std::size_t h = 0; h < 24; ++h) d.weekly_profile[day * 24 + h] = shape[h] * (day == 4 ? 1.1 : 1.0);
  }
  // T, H, WS, AT, Rf. Commuters ride more in rain, discretionary riders stay home.
  d.weather_elasticities[static_cast<std::size_t>(StopClass::kCommuter)] = {-0.02, 0.0, -0.02, -0.02, 0.08};
  d.weather_elasticities[static_cast<std::size_t>(StopClass::kDiscretionary)] = {0.05, -0.03, -0.05, 0.05, -0.15};
  return d;
}

void DemandSpec::validate() const {
  for (const double b : base_rate) {
    if (!(b >= 0.0)) throw ConfigError("synth: base rates must be non-negative");
  }
  for (const double m : weekly_profile) {
    if (!(m >= 0.0)) throw ConfigError("synth: weekly profile multipliers must be non-negative");
  }
  if (!(zero_inflation >= 0.0 && zero_inflation <= 1.0)) throw ConfigError("synth: zero_inflation must lie in [0, 1]");
  if (!(noise >= 0.0)) throw ConfigError("synth: noise must be non-negative");
  if (!(persistence >= 0.0 && persistence < 1.0)) throw ConfigError("synth: persistence must lie in [0, 1)");
  if (!(persistence_sd >= 0.0)) throw ConfigError("synth: persistence_sd must be non-negative");
  for (const double s : anomaly_scale) {
    if (!(s > 0.0)) throw ConfigError("synth: anomaly scales must be positive");
  }
}

double weather_multiplier(const DemandSpec& demand, StopClass cls, const HourlyWeather& w) {
  const auto a = anomalies(demand, w);
  const auto& e = demand.weather_elasticities[static_cast<std::size_t>(cls)];
  double s = 0.0;
  for (std::size_t k = 0; k < kWeatherFeatureCount; ++k) s += e[k] * a[k];
  return std::exp(s);
}

double demand_mean(const DemandSpec& demand, StopClass cls, double stop_effect, const HourlyWeather& w,
                   std::int64_t hour_index, Timestamp origin, const CalendarConfig& calendar) {
  const Timestamp t = origin.plus_hours(hour_index);
  const CivilDate date = t.date();
  const int hour = t.hour_of_day();
  const bool holiday = calendar.is_public_holiday(date);
  const std::size_t day = holiday ? 6 : static_cast<std::size_t>(t.weekday() - 1);
  double m = demand.base_rate[static_cast<std::size_t>(cls)] * stop_effect *
             demand.weekly_profile[day * 24 + static_cast<std::size_t>(hour)];
  if (!holiday && calendar.is_school_holiday(date)) m *= demand.school_holiday_factor;
  if (calendar.is_flexible_day(date)) m *= demand.flexible_day_factor;
  return m * weather_multiplier(demand, cls, w);
}

StopHourCounts gen_ridership(const SyntheticCity& city, std::span<const HourlyWeather> weather,
                             const CalendarConfig& calendar, Timestamp origin, std::int64_t hours,
                             const DemandSpec& demand, std::uint64_t seed) {
  demand.validate();
  if (hours < 1) throw DataError("synth: ridership needs a positive hour span");
  if (weather.size() != static_cast<std::size_t>(hours))
    throw DataError("synth: weather covers " + std::to_string(weather.size()) + " hours, ridership span is " +
                    std::to_string(hours));
  for (std::size_t u = 0; u < weather.size(); ++u) {
    if (weather[u].hour_index != static_cast<std::int64_t>(u)) throw DataError("synth: weather hours are not consecutive from 0");
  }
  if (city.stop_class.size() != city.stops.size() || city.stop_effect.size() != city.stops.size())
    throw DataError("synth: city stop attributes are inconsistent");

  std::vector<std::string> ids;
  for (const auto& s : city.stops) ids.push_back(s.stop_id);
  StopHourCounts counts(ids, origin, hours);

  std::unordered_map<std::string, const ServiceWindow*> windows;
  for (const auto& w : city.service_windows) windows.emplace(w.stop_id, &w);

  // Hour-level mean per class with a unit stop effect.
  const auto n_hours = static_cast<std::size_t>(hours);
  std::array<std::vector<double>, kStopClassCount> hour_mean;
  std::vector<std::uint8_t> weekday(n_hours), hour_of_day(n_hours);
  for (std::size_t k = 0; k < kStopClassCount; ++k) {
    hour_mean[k].resize(n_hours);
    for (std::size_t u = 0; u < n_hours; ++u) {
      hour_mean[k][u] = demand_mean(demand, static_cast<StopClass>(k), 1.0, weather[u], static_cast<std::int64_t>(u),
                                    origin, calendar);
    }
  }
  for (std::size_t u = 0; u < n_hours; ++u) {
    const Timestamp t = origin.plus_hours(static_cast<std::int64_t>(u));
    weekday[u] = static_cast<std::uint8_t>(t.weekday());
    hour_of_day[u] = static_cast<std::uint8_t>(t.hour_of_day());
  }

  const Rng master(seed, kRideStream);
  const double sd = demand.persistence_sd;
  const double rho = demand.persistence;
  const double innovation = std::sqrt(1.0 - rho * rho) * sd;
  const auto n_stops = static_cast<std::ptrdiff_t>(city.stops.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t si = 0; si < n_stops; ++si) {
    const auto s = static_cast<std::size_t>(si);
    Rng rng = master.split(s);
    const auto it = windows.find(city.stops[s].stop_id);
    const ServiceWindow* window = it == windows.end() ? nullptr : it->second;
    const auto& means = hour_mean[static_cast<std::size_t>(city.stop_class[s])];
    auto series = counts.series(s);
    double z = sd > 0.0 ? rng.normal(0.0, sd) : 0.0;
    for (std::size_t u = 0; u < n_hours; ++u) {
      if (u > 0 && sd > 0.0) z = rho * z + innovation * rng.normal();
      if (window != nullptr && !window->covers(weekday[u], hour_of_day[u])) continue;
      if (rng.bernoulli(demand.zero_inflation)) continue;
      const double mu = means[u] * city.stop_effect[s] * std::exp(z - 0.5 * sd * sd);
      const double lambda = demand.noise > 0.0 ? rng.gamma(1.0 / demand.noise, mu * demand.noise) : mu;
      series[u] = static_cast<std::uint32_t>(rng.poisson(lambda));
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Trips

std::vector<TripRecord> expand_trips(const SyntheticCity& city, const StopHourCounts& counts, const TripSpec& spec,
                                     std::uint64_t seed) {
  const Rng master(seed, kTripStream);
  const std::size_t n_stops = counts.stop_count();
  std::vector<std::vector<TripRecord>> per_stop(n_stops);
  std::unordered_map<std::string, std::size_t> site_of;
  for (std::size_t i = 0; i < city.stops.size(); ++i) site_of.emplace(city.stops[i].stop_id, i);

  std::vector<std::size_t> site_index(n_stops);
  for (std::size_t s = 0; s < n_stops; ++s) {
    const auto it = site_of.find(counts.stop_ids()[s]);
    if (it == site_of.end()) throw DataError("synth: count series for unknown stop '" + counts.stop_ids()[s] + "'");
    site_index[s] = it->second;
  }

  const auto n = static_cast<std::ptrdiff_t>(n_stops);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto s = static_cast<std::size_t>(si);
    Rng rng = master.split(s);
    const std::string& stop = counts.stop_ids()[s];
    const std::size_t site = site_index[s];
    const double median = spec.median_minutes[static_cast<std::size_t>(zone_of(city, city.stops[site].position))];
    auto& out = per_stop[s];
    std::size_t serial = 0;
    auto make_trip = [&](std::int64_t hour, double minutes) {
      TripRecord t;
      t.card_id = "C" + std::to_string(rng.below(50'000));
      t.journey_id = "J" + std::to_string(s + 1) + "-" + std::to_string(++serial);
      t.route_id = "R" + std::to_string(s % 40 + 1);
      t.board_stop = stop;
      t.board_time = counts.origin().plus_hours(hour).plus_minutes(static_cast<std::int64_t>(rng.below(60)));
      if (city.stops.size() > 1) {
        auto other = static_cast<std::size_t>(rng.below(city.stops.size() - 1));
        if (other >= site) ++other;
        t.alight_stop = city.stops[other].stop_id;
      }
      t.alight_time = t.board_time.plus_minutes(static_cast<std::int64_t>(minutes));
      return t;
    };
    for (std::int64_t u = 0; u < counts.hours(); ++u) {
      const std::uint32_t c = counts.at(s, u);
      for (std::uint32_t k = 0; k < c; ++k) {
        const double minutes = std::max(1.0, std::round(rng.lognormal(std::log(median), spec.duration_log_sd)));
        TripRecord t = make_trip(u, minutes);
        if (rng.bernoulli(spec.missing_tap_off)) {
          t.alight_stop.reset();
          t.alight_time.reset();
        }
        out.push_back(std::move(t));
        if (rng.bernoulli(spec.overlong_rate)) {
          out.push_back(make_trip(u, 181.0 + static_cast<double>(rng.below(220))));
        }
        if (rng.bernoulli(spec.unknown_stop_rate)) {
          TripRecord bad = make_trip(u, minutes);
          bad.board_stop = "X" + std::to_string(rng.below(1'000));
          out.push_back(std::move(bad));
        }
        if (rng.bernoulli(spec.negative_duration_rate)) {
          out.push_back(make_trip(u, -1.0 - static_cast<double>(rng.below(30))));
        }
      }
    }
  }
  std::vector<TripRecord> trips;
  std::size_t total = 0;
  for (const auto& v : per_stop) total += v.size();
  trips.reserve(total);
  for (auto& v : per_stop) std::move(v.begin(), v.end(), std::back_inserter(trips));
  return trips;
}

// ---------------------------------------------------------------------------
// Corpus

CalendarConfig synthetic_calendar() {
  CalendarConfig cal;
  for (const auto& d : {CivilDate{2019, 1, 1}, CivilDate{2019, 1, 28}, CivilDate{2019, 4, 19}, CivilDate{2019, 4, 20},
                        CivilDate{2019, 4, 22}, CivilDate{2019, 4, 25}, CivilDate{2019, 5, 6}, CivilDate{2019, 8, 14},
                        CivilDate{2019, 10, 7}, CivilDate{2019, 12, 25}, CivilDate{2019, 12, 26}}) {
    cal.public_holidays.insert(d);
  }
  cal.school_holidays = {{{2019, 1, 1}, {2019, 1, 27}},
                         {{2019, 4, 6}, {2019, 4, 22}},
                         {{2019, 6, 29}, {2019, 7, 14}},
                         {{2019, 9, 21}, {2019, 10, 7}},
                         {{2019, 12, 14}, {2019, 12, 31}}};
  cal.flexible_dev_days = {CivilDate{2019, 2, 22}, CivilDate{2019, 4, 5}, CivilDate{2019, 6, 28}};
  return cal;
}

Corpus generate(const SynthConfig& config) {
  Corpus corpus;
  CitySpec city_spec = config.city;
  city_spec.seed = config.seed;
  corpus.city = gen_city(city_spec);
  corpus.calendar = synthetic_calendar();
  corpus.origin = config.origin;
  corpus.hours = static_cast<std::int64_t>(config.days) * 24;
  corpus.weather = gen_weather(config.days, config.origin, config.seed, config.climate);
  const auto hourly = hourly_weather(corpus.weather, corpus.origin, corpus.hours);
  corpus.counts = gen_ridership(corpus.city, hourly, corpus.calendar, corpus.origin, corpus.hours, config.demand,
                                config.seed);
  corpus.trips = expand_trips(corpus.city, corpus.counts, config.trips, config.seed);
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter out(dir / "stops.csv");
    out.row({"stop_id", "lon", "lat", "busway"});
    for (const auto& s : corpus.city.stops) {
      out.field(s.stop_id).field(s.position.lon).field(s.position.lat).field(static_cast<long long>(s.busway));
      out.end_row();
    }
  }
  {
    CsvWriter out(dir / "amenities.csv");
    out.row({"category", "lon", "lat"});
    for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
      for (const auto& p : corpus.city.amenities[c]) {
        out.field(amenity_name(static_cast<AmenityCategory>(c))).field(p.lon).field(p.lat);
        out.end_row();
      }
    }
  }
  {
    CsvWriter out(dir / "service_windows.csv");
    out.row({"stop_id", "weekday", "start_hour", "end_hour"});
    for (const auto& w : corpus.city.service_windows) {
      for (std::size_t d = 0; d < 7; ++d) {
        for (const auto& iv : w.by_weekday[d]) {
          out.field(w.stop_id)
              .field(static_cast<long long>(d + 1))
              .field(static_cast<long long>(iv.start_hour))
              .field(static_cast<long long>(iv.end_hour));
          out.end_row();
        }
      }
    }
  }
  {
    CsvWriter out(dir / "weather.csv");
    out.row({"time", "temperature", "humidity", "wind_speed", "rainfall"});
    for (const auto& w : corpus.weather) {
      out.field(format_timestamp(w.time)).field(w.temperature).field(w.humidity).field(w.wind_speed).field(w.rainfall);
      out.end_row();
    }
  }
  {
    CsvWriter out(dir / "trips.csv");
    out.row({"card_id", "journey_id", "route_id", "board_stop", "alight_stop", "board_time", "alight_time"});
    for (const auto& t : corpus.trips) {
      out.field(t.card_id).field(t.journey_id).field(t.route_id).field(t.board_stop);
      out.field(t.alight_stop.value_or(""));
      out.field(format_timestamp(t.board_time));
      out.field(t.alight_time ? format_timestamp(*t.alight_time) : std::string());
      out.end_row();
    }
  }
  std::ofstream cfg(dir / "calendar.toml");
  if (!cfg) throw DataError("cannot write " + (dir / "calendar.toml").string());
  auto quoted_dates = [](const auto& dates) {
    std::string s;
    for (const auto& d : dates) s += (s.empty() ? "\"" : ", \"") + format_date(d) + "\"";
    return "[" + s + "]";
  };
  const auto& cal = corpus.calendar;
  std::string school;
  for (const auto& r : cal.school_holidays) {
    school += (school.empty() ? "\"" : ", \"") + format_date(r.first) + ".." + format_date(r.last) + "\"";
  }
  auto range = [](const HourRange& r) { return "[" + std::to_string(r.first) + ", " + std::to_string(r.last) + "]"; };
  cfg << "[calendar]\n"
      << "public_holidays = " << quoted_dates(cal.public_holidays) << '\n'
      << "school_holidays = [" << school << "]\n"
      << "flexible_dev_days = " << quoted_dates(cal.flexible_dev_days) << '\n'
      << "am_peak = " << range(cal.am_peak) << '\n'
      << "pm_peak = " << range(cal.pm_peak) << '\n'
      << "weekend_peak = " << range(cal.weekend_peak) << '\n'
      << "night_hours = " << range(cal.night_hours) << "\n\n"
      << "[geography]\n"
      << "cbd = [" << format_double(corpus.city.geography.cbd.lon) << ", " << format_double(corpus.city.geography.cbd.lat)
      << "]\n"
      << "ring_radii = [" << format_double(corpus.city.geography.ring_radii[0]) << ", "
      << format_double(corpus.city.geography.ring_radii[1]) << ", " << format_double(corpus.city.geography.ring_radii[2])
      << "]\n\n"
      << "[panel]\n"
      << "origin = \"" << format_timestamp(corpus.origin) << "\"\n"
      << "hours = " << corpus.hours << '\n';
}

}  // namespace stormrider::synth
