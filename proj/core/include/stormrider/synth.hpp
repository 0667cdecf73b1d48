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
#include <span>
#include <string>
#include <vector>

#include "stormrider/features.hpp"
#include "stormrider/ingest.hpp"

namespace stormrider::synth {

// City

struct CitySpec {
  std::size_t n_stops = 200;
  LonLat cbd_center{153.0251, -27.4698};
  /// City-centre, inner-city and outer-ring radii (m), strictly increasing.
  std::array<double, 3> ring_radii{1'500.0, 6'000.0, 20'000.0};
  /// Share of stops placed on busway corridors.
  double busway_fraction = 0.1;
  /// Secondary activity centres besides the CBD.
  std::size_t activity_centres = 6;
  /// Amenity points per activity centre, per category (CBD: three times).
  std::array<double, kAmenityCategoryCount> amenity_intensity{60, 8, 1, 15, 10, 12, 10, 2, 8, 4, 5, 6, 12, 40, 6};
  std::uint64_t seed = 42;

  void validate() const;
};

enum class StopClass : std::uint8_t { kCommuter, kDiscretionary };

struct SyntheticCity {
  GeographyConfig geography;
  std::vector<StopSite> stops;
  std::vector<StopClass> stop_class;
  /// Demand multiplier per stop (location, corridor, nearby activity).
  std::vector<double> stop_effect;
  std::vector<LonLat> activity_centres;  // [0] is the CBD
  AmenityPoints amenities;
  std::vector<ServiceWindow> service_windows;
};

/// Stops by zone share (CC 5%, IC 45%, OR 50%) plus busway corridors,
/// amenities clustered around activity centres, weekday/weekend service.
/// Throws ConfigError on n_stops < 2 or bad radii/fractions.
SyntheticCity gen_city(const CitySpec& spec);

// Weather

/// Subtropical late-summer-to-autumn parameters.
struct Climate {
  double mean_temperature = 25.0;     // deg C at the start
  double drift_per_day = -0.05;       // deg C
  double diurnal_amplitude = 4.5;     // deg C, peak mid-afternoon
  double temperature_noise_sd = 1.2;  // stationary SD of the AR component
  double humidity_mean = 68.0;
  double humidity_per_degree = -2.5;  // anti-correlation with T anomalies
  double wind_median = 3.0;           // m/s
  double wind_log_sd = 0.45;
  double rain_bursts_per_day = 0.35;
  double burst_median_hours = 3.0;
  double burst_mean_intensity = 4.0;  // mm per hour
  double rain_cooling = 2.0;          // deg C while raining
};

/// 5-minute readings for `days` days starting at `origin`.
std::vector<WeatherReading> gen_weather(int days, Timestamp origin, std::uint64_t seed,
                                        const Climate& climate = {});

// Ridership

inline constexpr std::size_t kStopClassCount = 2;
inline constexpr std::size_t kHoursPerWeek = 168;

struct DemandSpec {
  /// Mean boardings per hour by stop class before any multiplier.
  std::array<double, kStopClassCount> base_rate{2.5, 2.0};
  /// Probability that an hour is forced to zero.
  double zero_inflation = 0.15;
  /// Multipliers indexed (iso_weekday - 1) * 24 + hour.
  std::array<double, kHoursPerWeek> weekly_profile{};
  /// Per class, response per unit anomaly of T, H, WS, AT and Rf.
  std::array<std::array<double, kWeatherFeatureCount>, kStopClassCount> weather_elasticities{};
  /// Reference level and scale of each weather anomaly (Rf: 0 and 1 mm).
  std::array<double, kWeatherFeatureCount> anomaly_reference{24.0, 68.0, 3.2, 25.0, 0.0};
  std::array<double, kWeatherFeatureCount> anomaly_scale{4.0, 12.0, 1.5, 5.0, 1.0};
  /// Gamma dispersion of the Poisson mean (variance of the multiplier).
  double noise = 0.35;
  /// Hourly AR(1) coefficient and stationary SD of a latent log-demand
  /// swing per stop.
  double persistence = 0.85;
  double persistence_sd = 0.35;
  /// Public holidays follow the Sunday profile; these scale the rest.
  double school_holiday_factor = 0.85;
  double flexible_day_factor = 0.9;

  /// Commuter/discretionary defaults with a two-peak weekday profile.
  static DemandSpec defaults();
  void validate() const;
};

/// Weather part of the mean: exp(sum of elasticity * anomaly).
double weather_multiplier(const DemandSpec& demand, StopClass cls, const HourlyWeather& w);

/// Mean boardings before the zero gate and latent swing, for hour
/// `hour_index` after `origin`.
double demand_mean(const DemandSpec& demand, StopClass cls, double stop_effect, const HourlyWeather& w,
                   std::int64_t hour_index, Timestamp origin, const CalendarConfig& calendar);

/// Counts from a zero-gated Poisson-gamma draw around demand_mean. Hours
/// outside a stop's service window are zero. `weather` must hold one entry
/// per hour of [origin, origin + hours); otherwise DataError.
StopHourCounts gen_ridership(const SyntheticCity& city, std::span<const HourlyWeather> weather,
                             const CalendarConfig& calendar, Timestamp origin, std::int64_t hours,
                             const DemandSpec& demand, std::uint64_t seed);

// Trips and whole corpora

struct TripSpec {
  /// Median ride minutes for city-centre, inner-city and outer-ring stops.
  std::array<double, 3> median_minutes{8.0, 14.0, 22.0};
  double duration_log_sd = 0.55;
  double missing_tap_off = 0.03;
  /// Extra faulty trips per genuine trip.
  double overlong_rate = 0.002;
  double unknown_stop_rate = 0.001;
  double negative_duration_rate = 0.0005;
};

/// One trip per counted boarding (tap-on minute uniform within the hour),
/// plus injected faulty trips that cleaning should remove.
std::vector<TripRecord> expand_trips(const SyntheticCity& city, const StopHourCounts& counts,
                                     const TripSpec& spec, std::uint64_t seed);

/// Holidays, school holidays and flexible days of the synthetic year.
CalendarConfig synthetic_calendar();

struct SynthConfig {
  CitySpec city;
  Climate climate;
  DemandSpec demand = DemandSpec::defaults();
  TripSpec trips;
  Timestamp origin = Timestamp::from_civil({2019, 2, 4}, 0, 0);
  int days = 90;
  std::uint64_t seed = 42;
};

struct Corpus {
  SyntheticCity city;
  CalendarConfig calendar;
  Timestamp origin;
  std::int64_t hours = 0;
  std::vector<WeatherReading> weather;
  StopHourCounts counts;
  std::vector<TripRecord> trips;
};

Corpus generate(const SynthConfig& config);

/// Writes stops.csv, amenities.csv, service_windows.csv, weather.csv,
/// trips.csv and calendar.toml into `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace stormrider::synth
