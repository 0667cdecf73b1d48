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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "stormrider/errors.hpp"
#include "stormrider/features.hpp"
#include "stormrider/geo.hpp"
#include "stormrider/panel.hpp"
#include "stormrider/rng.hpp"

namespace stormrider {
namespace {

const Timestamp kMonday = Timestamp::from_civil({2019, 2, 4}, 0, 0);

// Independent evaluation in long double.
long double steadman(long double t, long double h, long double ws) {
  const long double e = (h / 100.0L) * 6.105L * expl(17.27L * t / (237.7L + t));
  return t + 0.33L * e - 0.70L * ws - 4.00L;
}

TEST(ApparentTemperature, WorkedValueAndIdentities) {
  EXPECT_NEAR(apparent_temperature(25, 50, 2), 24.81, 0.005);
  for (const double t : {-10.0, 0.0, 17.5, 41.0}) EXPECT_EQ(apparent_temperature(t, 0, 0), t - 4.0);
  EXPECT_NEAR(apparent_temperature(20, 60, 3) - apparent_temperature(20, 60, 4), 0.70, 1e-12);
  EXPECT_THROW(apparent_temperature(-237.7, 50, 1), std::domain_error);
}

TEST(ApparentTemperature, GridAgainstLongDouble) {
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      for (int k = 0; k < 10; ++k) {
        const double t = -5.0 + 4.5 * i, h = 11.0 * j, ws = 1.7 * k;
        EXPECT_NEAR(apparent_temperature(t, h, ws), static_cast<double>(steadman(t, h, ws)), 1e-9);
      }
    }
  }
}

TEST(Haversine, IdentitySymmetryAndDegree) {
  const LonLat a{153.0, -27.5};
  EXPECT_EQ(haversine(a, a), 0.0);
  EXPECT_NEAR(haversine({0, 0}, {0, 1}), kEarthRadiusMetres * std::numbers::pi / 180.0, 1e-6);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const LonLat p{rng.uniform(-180, 180), rng.uniform(-80, 80)};
    const LonLat q{rng.uniform(-180, 180), rng.uniform(-80, 80)};
    EXPECT_DOUBLE_EQ(haversine(p, q), haversine(q, p));
  }
}

TEST(AmenityDensity, BoundaryFixtures) {
  const LonLat stop{153.0, -27.5};
  AmenityPoints points;
  auto& shops = points[static_cast<std::size_t>(AmenityCategory::kShops)];
  shops = {stop, {153.004, -27.5}, {153.005, -27.5}};
  const std::vector<LonLat> stops{stop};
  const auto d = amenity_density(stops, points);
  EXPECT_LT(haversine(stop, {153.004, -27.5}), 400.0);
  EXPECT_GT(haversine(stop, {153.005, -27.5}), 400.0);
  EXPECT_EQ(d.raw[0][static_cast<std::size_t>(AmenityCategory::kShops)], 2u);
}

TEST(AmenityDensity, NormalisedByCategoryMax) {
  const std::vector<LonLat> stops{{153.0, -27.5}, {153.1, -27.5}};
  AmenityPoints points;
  points[0] = {{153.0, -27.5}, {153.0, -27.5}, {153.1, -27.5}};
  const auto d = amenity_density(stops, points);
  EXPECT_DOUBLE_EQ(d.normalized[0][0], 1.0);
  EXPECT_DOUBLE_EQ(d.normalized[1][0], 0.5);
  EXPECT_DOUBLE_EQ(d.normalized[0][3], 0.0);  // empty category
}

TEST(AmenityDensity, MatchesBruteForce) {
  Rng rng(17);
  for (int city = 0; city < 5; ++city) {
    std::vector<LonLat> stops;
    AmenityPoints points;
    for (int i = 0; i < 60; ++i) stops.push_back({153.0 + rng.uniform(0, 0.05), -27.5 + rng.uniform(0, 0.05)});
    for (int i = 0; i < 200; ++i) {
      points[rng.below(kAmenityCategoryCount)].push_back({153.0 + rng.uniform(0, 0.05), -27.5 + rng.uniform(0, 0.05)});
    }
    const auto d = amenity_density(stops, points);
    for (std::size_t s = 0; s < stops.size(); ++s) {
      for (std::size_t c = 0; c < kAmenityCategoryCount; ++c) {
        const auto expected = std::count_if(points[c].begin(), points[c].end(),
                                            [&](const LonLat& p) { return haversine(stops[s], p) <= 400.0; });
        EXPECT_EQ(d.raw[s][c], static_cast<std::uint32_t>(expected));
      }
    }
  }
}

// Smallest SSD over every way of cutting sorted values into k runs.
double brute_force_ssd(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end());
  const int n = static_cast<int>(v.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> cuts(static_cast<std::size_t>(k - 1));
  auto ssd = [&](int a, int b) {
    double m = 0;
    for (int i = a; i < b; ++i) m += v[static_cast<std::size_t>(i)];
    m /= (b - a);
    double s = 0;
    for (int i = a; i < b; ++i) s += (v[static_cast<std::size_t>(i)] - m) * (v[static_cast<std::size_t>(i)] - m);
    return s;
  };
  auto rec = [&](auto&& self, int depth, int start, double acc) -> void {
    if (depth == k - 1) {
      best = std::min(best, acc + ssd(start, n));
      return;
    }
    for (int c = start + 1; c <= n - (k - 1 - depth); ++c) self(self, depth + 1, c, acc + ssd(start, c));
  };
  rec(rec, 0, 0, 0.0);
  return best;
}

TEST(Jenks, TwoClusters) {
  const std::vector<double> v{1, 2, 3, 10, 11, 12};
  const auto b = jenks_breaks(v, 2);
  ASSERT_EQ(b.interior_breaks.size(), 1u);
  EXPECT_EQ(b.interior_breaks[0], 3.0);
}

TEST(Jenks, RejectsTooFewDistinctValues) {
  const std::vector<double> v{4, 4, 4};
  EXPECT_THROW(jenks_breaks(v, 2), std::invalid_argument);
  EXPECT_THROW(jenks_breaks(v, 1), std::invalid_argument);
}

TEST(Jenks, SmallArraysMatchExhaustiveSearch) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 4 + static_cast<int>(rng.below(7));
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(rng.below(30)));
    std::vector<double> distinct = v;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const int k = 2 + static_cast<int>(rng.below(std::min<std::size_t>(3, distinct.size() - 1)));
    if (static_cast<std::size_t>(k) > distinct.size()) continue;
    const auto b = jenks_breaks(v, k);
    EXPECT_TRUE(std::is_sorted(b.interior_breaks.begin(), b.interior_breaks.end()));
    EXPECT_NEAR(class_ssd(v, b), brute_force_ssd(v, k), 1e-9);
  }
}

TEST(JourneyShares, PublishedBreaksExample) {
  const auto breaks = reference_journey_breaks();
  ASSERT_EQ(breaks.interior_breaks, (std::vector<double>{6.85, 11.68, 17.43, 25.5}));
  std::vector<TripRecord> trips;
  for (const int minutes : {5, 5, 30}) {
    TripRecord t;
    t.board_stop = "A";
    t.board_time = kMonday;
    t.alight_time = kMonday.plus_minutes(minutes);
    trips.push_back(t);
  }
  const auto shares = journey_time_shares(trips, breaks);
  const auto& q = shares.at("A");
  EXPECT_DOUBLE_EQ(q[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(q[4], 1.0 / 3.0);
  EXPECT_EQ(q[1] + q[2] + q[3], 0.0);
  EXPECT_EQ(journey_class(6.85, breaks), 0u);
  EXPECT_EQ(journey_class(6.86, breaks), 1u);
  EXPECT_EQ(journey_class(25.5, breaks), 3u);
  EXPECT_EQ(journey_class(99.0, breaks), 4u);
}

TEST(CalendarFeatures, TableExamples) {
  const CalendarConfig cal;
  // Tuesday 07:00.
  auto c = calendar_features(24 + 7, kMonday, cal);
  EXPECT_TRUE(c.am_peak);
  EXPECT_FALSE(c.pm_peak);
  EXPECT_FALSE(c.weekend);
  EXPECT_EQ(c.day_of_week, 2);
  EXPECT_EQ(c.hour_of_day, 8);
  // Saturday 10:00.
  c = calendar_features(5 * 24 + 10, kMonday, cal);
  EXPECT_TRUE(c.weekend_peak);
  EXPECT_TRUE(c.weekend);
  EXPECT_FALSE(c.am_peak);
  // 03:00 at a stop served 06:00-23:00.
  ServiceWindow w;
  w.stop_id = "A";
  for (auto& day : w.by_weekday) day = {{6, 23}};
  c = calendar_features(3, kMonday, cal, &w);
  EXPECT_TRUE(c.night);
  EXPECT_FALSE(c.service);
  c = calendar_features(12, kMonday, cal, &w);
  EXPECT_TRUE(c.service);
}

TEST(CalendarFeatures, HolidaySuppressesWeekdayPeaks) {
  CalendarConfig cal;
  cal.public_holidays.insert({2019, 2, 4});
  const auto c = calendar_features(7, kMonday, cal);
  EXPECT_TRUE(c.public_holiday);
  EXPECT_FALSE(c.am_peak);
  EXPECT_FALSE(is_peak(c));
}

TEST(FeatureCatalogue, FixedWidthAndOrder) {
  const auto& names = feature_names();
  EXPECT_EQ(names.size(), 43u);
  EXPECT_EQ(names[0], "HourLag");
  EXPECT_EQ(names[index_of(Feature::kRainfall)], "Rf");
  EXPECT_EQ(feature_index("WeekLag"), 2u);
  std::size_t weather = 0;
  for (std::size_t i = 0; i < names.size(); ++i) weather += is_weather_feature(i);
  EXPECT_EQ(weather, kWeatherFeatureCount);
}

// Small panel with distinct counts so every lag can be checked by index.
struct SmallPanel {
  static constexpr std::int64_t kHours = 200;
  StopHourPanel panel;

  static StopHourPanel make() {
    StopHourCounts counts({"A", "B"}, kMonday, kHours);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::int64_t h = 0; h < kHours; ++h) counts.at(s, h) = static_cast<std::uint32_t>(1000 * s + h);
    }
    std::vector<HourlyWeather> weather(kHours);
    for (std::int64_t h = 0; h < kHours; ++h) {
      auto& w = weather[static_cast<std::size_t>(h)];
      w.hour_index = h;
      w.temperature = 20.0 + 0.01 * static_cast<double>(h);
      w.humidity = 60;
      w.wind_speed = 2;
      w.rainfall = h % 7 == 0 ? 1.0 : 0.0;
      w.apparent_temperature = apparent_temperature(w.temperature, w.humidity, w.wind_speed);
    }
    std::vector<StopRecord> stops(2);
    stops[0].stop_id = "A";
    stops[0].city_centre = true;
    stops[0].amenity_density[3] = 0.25;
    stops[1].stop_id = "B";
    stops[1].outer_ring = true;
    stops[1].journey_shares = {0.1, 0.2, 0.3, 0.2, 0.2};
    return build_panel(std::move(counts), std::move(weather), CalendarConfig{}, std::move(stops));
  }

  SmallPanel() : panel(make()) {}
};

TEST(Panel, RowCountAndLagIndexing) {
  const SmallPanel p;
  ASSERT_EQ(p.panel.size(), 2u * (SmallPanel::kHours - 168));
  for (std::size_t row = 0; row < p.panel.size(); ++row) {
    const auto s = p.panel.stop_of(row);
    const auto u = p.panel.hour_of(row);
    const double base = 1000.0 * static_cast<double>(s);
    EXPECT_EQ(p.panel.target(row), base + static_cast<double>(u));
    EXPECT_EQ(p.panel.feature(row, index_of(Feature::kHourLag)), base + static_cast<double>(u - 1));
    EXPECT_EQ(p.panel.feature(row, index_of(Feature::kDayLag)), base + static_cast<double>(u - 24));
    EXPECT_EQ(p.panel.feature(row, index_of(Feature::kWeekLag)), base + static_cast<double>(u - 168));
    EXPECT_DOUBLE_EQ(p.panel.feature(row, index_of(Feature::kTemperature)), 20.0 + 0.01 * static_cast<double>(u - 1));
  }
  EXPECT_EQ(p.panel.hour_of(0), 168);
}

TEST(Panel, StopConstantColumnsAndMaterialise) {
  const SmallPanel p;
  const auto table = p.panel.materialize_all();
  ASSERT_EQ(table.features.cols(), kFeatureCount);
  ASSERT_EQ(table.size(), p.panel.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const bool a = table.row_stop[r] == 0;
    EXPECT_EQ(table.features(r, index_of(Feature::kCityCentre)), a ? 1.0f : 0.0f);
    EXPECT_EQ(table.features(r, index_of(Feature::kOuterRing)), a ? 0.0f : 1.0f);
    EXPECT_EQ(table.features(r, index_of(Feature::kQ3)), a ? 0.0f : 0.3f);
    EXPECT_EQ(table.features(r, index_of(Feature::kFirstAmenity) + 3), a ? 0.25f : 0.0f);
    std::array<double, kFeatureCount> row{};
    p.panel.fill_row(r, row);
    for (std::size_t f = 0; f < kFeatureCount; ++f) EXPECT_EQ(table.features(r, f), static_cast<float>(row[f]));
  }
}

TEST(Panel, ZeroCountsPropagate) {
  StopHourCounts counts({"A"}, kMonday, 180);
  std::vector<HourlyWeather> weather(180);
  for (std::int64_t h = 0; h < 180; ++h) weather[static_cast<std::size_t>(h)].hour_index = h;
  std::vector<StopRecord> stops(1);
  stops[0].stop_id = "A";
  const auto panel = build_panel(std::move(counts), std::move(weather), CalendarConfig{}, std::move(stops));
  for (std::size_t r = 0; r < panel.size(); ++r) {
    EXPECT_EQ(panel.target(r), 0.0);
    EXPECT_EQ(panel.feature(r, 0) + panel.feature(r, 1) + panel.feature(r, 2), 0.0);
  }
}

TEST(Panel, ShortSpanIsError) {
  StopHourCounts counts({"A"}, kMonday, 169);
  std::vector<HourlyWeather> weather(169);
  std::vector<StopRecord> stops(1);
  stops[0].stop_id = "A";
  EXPECT_THROW(build_panel(std::move(counts), std::move(weather), CalendarConfig{}, std::move(stops)), DataError);
}

}  // namespace
}  // namespace stormrider
