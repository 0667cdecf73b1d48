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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stormrider {

/// A proleptic Gregorian calendar date.
struct CivilDate {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const CivilDate&) const = default;
};

/// Days since 1970-01-01 (Hinnant's days_from_civil).
std::int64_t days_from_civil(const CivilDate& date);
CivilDate civil_from_days(std::int64_t days);

/// ISO weekday of a day count: Monday = 1 ... Sunday = 7.
int iso_weekday(std::int64_t days);

/// Local wall-clock time at minute precision. Single time zone, no DST
/// adjustment: a timestamp is just minutes since 1970-01-01T00:00 local.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t minutes) : minutes_(minutes) {}

  static Timestamp from_civil(const CivilDate& date, int hour, int minute);

  [[nodiscard]] constexpr std::int64_t minutes() const { return minutes_; }
  [[nodiscard]] std::int64_t days() const;
  [[nodiscard]] CivilDate date() const;
  [[nodiscard]] int hour_of_day() const;
  [[nodiscard]] int minute_of_hour() const;
  [[nodiscard]] int weekday() const { return iso_weekday(days()); }

  constexpr Timestamp plus_minutes(std::int64_t m) const { return Timestamp(minutes_ + m); }
  constexpr Timestamp plus_hours(std::int64_t h) const { return Timestamp(minutes_ + 60 * h); }

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t minutes_ = 0;
};

/// Parses `YYYY-MM-DD`.
std::optional<CivilDate> parse_date(std::string_view text);

/// Parses `YYYY-MM-DDTHH:MM[:SS]` (a space is accepted in place of `T`).
/// Seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::string format_date(const CivilDate& date);
std::string format_timestamp(Timestamp t);

/// Whole hours from `origin` to `t`, floored.
std::int64_t hours_between(Timestamp origin, Timestamp t);

}  // namespace stormrider
