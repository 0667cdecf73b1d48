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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "stormrider/errors.hpp"
#include "stormrider/ingest.hpp"
#include "test_support.hpp"

namespace stormrider {
namespace {

using stormrider::testing::ScratchDir;

const Timestamp kOrigin = Timestamp::from_civil({2019, 2, 4}, 0, 0);

TripRecord trip(std::string stop, Timestamp board, std::optional<Timestamp> alight = std::nullopt) {
  TripRecord t;
  t.card_id = "c";
  t.journey_id = "j";
  t.route_id = "r";
  t.board_stop = std::move(stop);
  t.board_time = board;
  t.alight_time = alight;
  return t;
}

constexpr const char* kTripHeader = "card_id,journey_id,route_id,board_stop,alight_stop,board_time,alight_time\n";

TEST(ParseTrips, DurationFromTapOnAndOff) {
  ScratchDir dir;
  const auto file =
      dir.write("trips.csv", std::string(kTripHeader) + "c1,j1,r1,A,B,2019-02-04T08:02,2019-02-04T08:20\n");
  const auto parsed = parse_trips(file);
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.report.malformed, 0u);
  EXPECT_DOUBLE_EQ(*parsed.records[0].duration_minutes(), 18.0);
  EXPECT_EQ(parsed.records[0].board_stop, "A");
  EXPECT_EQ(*parsed.records[0].alight_stop, "B");
}

TEST(ParseTrips, MissingBoardStopIsCountedNotFatal) {
  ScratchDir dir;
  const auto file = dir.write("trips.csv", std::string(kTripHeader) +
                                               "c1,j1,r1,,B,2019-02-04T08:02,2019-02-04T08:20\n"
                                               "c2,j2,r1,A,,2019-02-04T09:00,\n");
  const auto parsed = parse_trips(file);
  EXPECT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.report.malformed, 1u);
  EXPECT_FALSE(parsed.records[0].alight_time.has_value());
  EXPECT_FALSE(parsed.records[0].duration_minutes().has_value());
}

TEST(ParseTrips, EmptyBodyIsEmpty) {
  ScratchDir dir;
  const auto parsed = parse_trips(dir.write("trips.csv", kTripHeader));
  EXPECT_TRUE(parsed.records.empty());
  EXPECT_EQ(parsed.report.malformed, 0u);
}

TEST(ParseTrips, MissingFileAndColumnAreHardErrors) {
  ScratchDir dir;
  EXPECT_THROW(parse_trips(dir.path() / "absent.csv"), DataError);
  const auto bad = dir.write("trips.csv", "card_id,board_stop\nc,A\n");
  EXPECT_THROW(parse_trips(bad), DataError);
}

TEST(ParseTrips, CustomSchemaAndExtraColumns) {
  ScratchDir dir;
  const auto file = dir.write("t.csv",
                              "extra,card,jid,route,from,to,on,off\n"
                              "x,c1,j1,r1,A,B,2019-02-04 08:00,2019-02-04 08:05\n");
  TripSchema schema{"card", "jid", "route", "from", "to", "on", "off"};
  const auto parsed = parse_trips(file, schema);
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_DOUBLE_EQ(*parsed.records[0].duration_minutes(), 5.0);
}

TEST(CleanTrips, DropsEachReasonAndTallies) {
  const std::unordered_set<std::string> stops{"A", "B"};
  const auto t0 = kOrigin.plus_hours(8);
  const std::vector<TripRecord> trips{
      trip("A", t0, t0.plus_minutes(200)),  // overlong
      trip("Z", t0, t0.plus_minutes(10)),   // unknown stop
      trip("A", t0, t0.plus_minutes(30)),   // kept
      trip("B", t0, t0.plus_minutes(-5)),   // negative
      trip("B", t0, t0.plus_minutes(180)),  // exactly three hours: kept
      trip("B", t0),                        // no tap-off: kept
  };
  const auto r = clean_trips(trips, stops);
  EXPECT_EQ(r.report.input, 6u);
  EXPECT_EQ(r.report.kept, 3u);
  EXPECT_EQ(r.report.overlong, 1u);
  EXPECT_EQ(r.report.ungeocodable, 1u);
  EXPECT_EQ(r.report.negative_duration, 1u);
  ASSERT_EQ(r.kept.size(), 3u);
  EXPECT_EQ(*r.kept[0].duration_minutes(), 30.0);
}

TEST(CleanTrips, Idempotent) {
  const std::unordered_set<std::string> stops{"A"};
  std::vector<TripRecord> trips;
  for (int i = 0; i < 40; ++i) {
    const auto t = kOrigin.plus_minutes(i * 37);
    trips.push_back(trip(i % 5 == 0 ? "Q" : "A", t, t.plus_minutes((i * 23) % 260 - 20)));
  }
  const auto once = clean_trips(trips, stops);
  const auto twice = clean_trips(once.kept, stops);
  ASSERT_EQ(once.kept.size(), twice.kept.size());
  for (std::size_t i = 0; i < once.kept.size(); ++i) {
    EXPECT_EQ(once.kept[i].board_time, twice.kept[i].board_time);
  }
  EXPECT_EQ(twice.report.kept, twice.report.input);
}

TEST(Aggregate, CountsBoardingsWithExplicitZeros) {
  const std::vector<std::string> stops{"A", "B"};
  std::vector<TripRecord> trips;
  for (int m : {0, 10, 59}) trips.push_back(trip("A", kOrigin.plus_hours(5).plus_minutes(m)));
  const auto c = aggregate_ridership(trips, stops, kOrigin, 24);
  EXPECT_EQ(c.stop_count(), 2u);
  EXPECT_EQ(c.hours(), 24);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::int64_t h = 0; h < 24; ++h) {
      EXPECT_EQ(c.at(s, h), (s == 0 && h == 5) ? 3u : 0u);
    }
  }
}

TEST(Aggregate, ZeroTripsGiveZeroGrid) {
  const std::vector<std::string> stops{"A", "B"};
  const auto c = aggregate_ridership({}, stops, kOrigin, 48);
  EXPECT_EQ(c.total(), 0u);
  EXPECT_EQ(c.series(1).size(), 48u);
}

TEST(Aggregate, TripOutsideWindowOrUnknownStopThrows) {
  const std::vector<std::string> stops{"A"};
  const std::vector<TripRecord> late{trip("A", kOrigin.plus_hours(30))};
  EXPECT_THROW(aggregate_ridership(late, stops, kOrigin, 24), DataError);
  const std::vector<TripRecord> early{trip("A", kOrigin.plus_minutes(-1))};
  EXPECT_THROW(aggregate_ridership(early, stops, kOrigin, 24), DataError);
  const std::vector<TripRecord> stray{trip("B", kOrigin)};
  EXPECT_THROW(aggregate_ridership(stray, stops, kOrigin, 24), DataError);
}

TEST(Aggregate, ConservesMassAfterWindowFilter) {
  const std::vector<std::string> stops{"A", "B", "C"};
  std::vector<TripRecord> trips;
  for (int i = 0; i < 500; ++i) {
    trips.push_back(trip(stops[static_cast<std::size_t>(i % 3)], kOrigin.plus_minutes(i * 7 - 100)));
  }
  const auto inside = filter_window(trips, kOrigin, 48);
  std::size_t expected = 0;
  for (const auto& t : trips) {
    const auto m = t.board_time.minutes() - kOrigin.minutes();
    expected += (m >= 0 && m < 48 * 60);
  }
  ASSERT_EQ(inside.size(), expected);
  EXPECT_EQ(aggregate_ridership(inside, stops, kOrigin, 48).total(), expected);
}

TEST(Aggregate, PaperPanelRowArithmetic) {
  // Stops x (hours - warm-up) for the published network.
  const std::int64_t stops = 5226, hours = 2208, warm_up = 168;
  EXPECT_EQ(stops * (hours - warm_up), 10'661'040);
}

std::vector<WeatherReading> readings_for_hour(std::int64_t hour, double temperature, double rain_each) {
  std::vector<WeatherReading> out;
  for (int i = 0; i < 12; ++i) {
    out.push_back({kOrigin.plus_hours(hour).plus_minutes(5 * i), temperature, 60.0, 2.0, rain_each});
  }
  return out;
}

TEST(HourlyWeather, MeanAndSum) {
  const auto r = readings_for_hour(0, 20.0, 0.1);
  const auto w = hourly_weather(r, kOrigin, 1);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_DOUBLE_EQ(w[0].temperature, 20.0);
  EXPECT_NEAR(w[0].rainfall, 1.2, 1e-12);
  EXPECT_FALSE(w[0].interpolated);
}

TEST(HourlyWeather, GapIsInterpolatedAndFlagged) {
  auto r = readings_for_hour(0, 20.0, 0.0);
  const auto later = readings_for_hour(2, 22.0, 0.5);
  r.insert(r.end(), later.begin(), later.end());
  const auto w = hourly_weather(r, kOrigin, 3);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[1].temperature, 21.0);
  EXPECT_TRUE(w[1].interpolated);
  EXPECT_EQ(w[1].rainfall, 0.0);
  EXPECT_FALSE(w[2].interpolated);
}

TEST(HourlyWeather, LengthMatchesSpanAndEndsHeldFlat) {
  const auto r = readings_for_hour(3, 25.0, 0.0);
  const auto w = hourly_weather(r, kOrigin, 7);
  ASSERT_EQ(w.size(), 7u);
  for (std::int64_t h = 0; h < 7; ++h) {
    EXPECT_EQ(w[static_cast<std::size_t>(h)].hour_index, h);
    EXPECT_DOUBLE_EQ(w[static_cast<std::size_t>(h)].temperature, 25.0);
    EXPECT_EQ(w[static_cast<std::size_t>(h)].interpolated, h != 3);
  }
}

TEST(HourlyWeather, NegativeZeroRainfallNormalised) {
  std::vector<WeatherReading> r{{kOrigin, 20.0, 50.0, 1.0, -0.0}};
  const auto w = hourly_weather(r, kOrigin, 1);
  EXPECT_FALSE(std::signbit(w[0].rainfall));
  EXPECT_EQ(w[0].rainfall, 0.0);
}

TEST(HourlyWeather, NoReadingsIsError) {
  EXPECT_THROW(hourly_weather({}, kOrigin, 5), DataError);
}

TEST(Calendar, DefaultsAndLoading) {
  const CalendarConfig defaults;
  EXPECT_EQ(defaults.am_peak, (HourRange{7, 8}));
  EXPECT_EQ(defaults.pm_peak, (HourRange{15, 17}));
  EXPECT_EQ(defaults.weekend_peak, (HourRange{9, 17}));
  EXPECT_EQ(defaults.night_hours, (HourRange{22, 5}));
  EXPECT_TRUE(defaults.night_hours.contains(23));
  EXPECT_TRUE(defaults.night_hours.contains(3));
  EXPECT_FALSE(defaults.night_hours.contains(12));

  const auto cfg = KvConfig::parse(
      "[calendar]\n"
      "public_holidays = [\"2019-04-19\"]\n"
      "school_holidays = [\"2019-04-06..2019-04-22\"]\n"
      "flexible_dev_days = [\"2019-03-01\"]\n"
      "am_peak = [6, 8]\n");
  const auto cal = load_calendar(cfg);
  EXPECT_TRUE(cal.is_public_holiday({2019, 4, 19}));
  EXPECT_TRUE(cal.is_school_holiday({2019, 4, 10}));
  EXPECT_FALSE(cal.is_school_holiday({2019, 4, 23}));
  EXPECT_TRUE(cal.is_flexible_day({2019, 3, 1}));
  EXPECT_EQ(cal.am_peak, (HourRange{6, 8}));
  EXPECT_THROW(load_calendar(KvConfig::parse("[calendar]\npm_peak = [15, 25]\n")), ConfigError);
}

TEST(ServiceWindows, ParseCoverAndRejectOverlap) {
  ScratchDir dir;
  const auto ok = dir.write("w.csv", "stop_id,weekday,start_hour,end_hour\nA,1,5,12\nA,1,14,24\nA,7,7,23\n");
  const auto windows = parse_service_windows(ok);
  ASSERT_EQ(windows.size(), 1u);
  EXPECT_TRUE(windows[0].covers(1, 5));
  EXPECT_FALSE(windows[0].covers(1, 12));
  EXPECT_TRUE(windows[0].covers(1, 23));
  EXPECT_FALSE(windows[0].covers(2, 10));
  EXPECT_TRUE(windows[0].covers(7, 22));
  const auto bad = dir.write("bad.csv", "stop_id,weekday,start_hour,end_hour\nA,1,5,12\nA,1,11,14\n");
  EXPECT_THROW(parse_service_windows(bad), DataError);
}

TEST(Stops, ParseAndAmenityCategories) {
  ScratchDir dir;
  const auto stops = parse_stops(dir.write("s.csv", "stop_id,lon,lat,busway\nA,153.02,-27.47,1\nB,153.1,-27.5,0\n"));
  ASSERT_EQ(stops.size(), 2u);
  EXPECT_TRUE(stops[0].busway);
  EXPECT_FALSE(stops[1].busway);
  EXPECT_DOUBLE_EQ(stops[1].position.lon, 153.1);

  const auto parsed =
      parse_amenities(dir.write("a.csv", "category,lon,lat\nshops,153,-27\nSn,153.1,-27.1\nspaceport,1,1\n"));
  EXPECT_EQ(parsed.records.size(), 2u);
  EXPECT_EQ(parsed.report.malformed, 1u);
  const auto grouped = group_amenities(parsed.records);
  EXPECT_EQ(grouped[static_cast<std::size_t>(AmenityCategory::kShops)].size(), 1u);
  EXPECT_EQ(grouped[static_cast<std::size_t>(AmenityCategory::kSustenance)].size(), 1u);
}

TEST(Geography, RadiiMustIncrease) {
  EXPECT_THROW(load_geography(KvConfig::parse("[geography]\nring_radii = [10, 5, 20]\n")), ConfigError);
  const auto g = load_geography(KvConfig::parse("[geography]\ncbd = [150, -30]\n"));
  EXPECT_EQ(g.cbd.lon, 150.0);
}

}  // namespace
}  // namespace stormrider
