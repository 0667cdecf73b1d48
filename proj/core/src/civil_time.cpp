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

#include "stormrider/civil_time.hpp"

#include <charconv>
#include <cstdio>

namespace stormrider {
namespace {

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool valid_date(const CivilDate& d) {
  if (d.month < 1 || d.month > 12 || d.day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = kDays[d.month - 1];
  const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) limit = 29;
  return d.day <= limit;
}

}  // namespace

std::int64_t days_from_civil(const CivilDate& date) {
  const std::int64_t y = date.year - (date.month <= 2 ? 1 : 0);
  const std::int64_t era = floor_div(y, 400);
  const std::int64_t yoe = y - era * 400;
  const std::int64_t mp = (date.month + 9) % 12;
  const std::int64_t doy = (153 * mp + 2) / 5 + date.day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
  const std::int64_t z = days + 719468;
  const std::int64_t era = floor_div(z, 146097);
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = yoe + era * 400 + (m <= 2 ? 1 : 0);
  return CivilDate{static_cast<int>(y), static_cast<int>(m), static_cast<int>(d)};
}

int iso_weekday(std::int64_t days) {
  // 1970-01-01 was a Thursday (ISO 4).
  const std::int64_t w = ((days % 7) + 7 + 3) % 7;  // 0 = Monday
  return static_cast<int>(w) + 1;
}

Timestamp Timestamp::from_civil(const CivilDate& date, int hour, int minute) {
  return Timestamp(days_from_civil(date) * 1440 + hour * 60 + minute);
}

std::int64_t Timestamp::days() const { return floor_div(minutes_, 1440); }

CivilDate Timestamp::date() const { return civil_from_days(days()); }

int Timestamp::hour_of_day() const {
  return static_cast<int>((minutes_ - days() * 1440) / 60);
}

int Timestamp::minute_of_hour() const {
  return static_cast<int>((minutes_ - days() * 1440) % 60);
}

std::optional<CivilDate> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  CivilDate d;
  if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
      !parse_int(text.substr(8, 2), d.day)) {
    return std::nullopt;
  }
  if (!valid_date(d)) return std::nullopt;
  return d;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() < 16) return std::nullopt;
  const auto date = parse_date(text.substr(0, 10));
  if (!date || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') return std::nullopt;
  int hour = 0;
  int minute = 0;
  if (!parse_int(text.substr(11, 2), hour) || !parse_int(text.substr(14, 2), minute)) {
    return std::nullopt;
  }
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) return std::nullopt;
  if (text.size() > 16) {
    int second = 0;
    if (text.size() != 19 || text[16] != ':' || !parse_int(text.substr(17, 2), second) ||
        second < 0 || second > 59) {
      return std::nullopt;
    }
  }
  return Timestamp::from_civil(*date, hour, minute);
}

std::string format_date(const CivilDate& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month, date.day);
  return buf;
}

std::string format_timestamp(Timestamp t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", t.hour_of_day(), t.minute_of_hour());
  return format_date(t.date()) + "T" + buf;
}

std::int64_t hours_between(Timestamp origin, Timestamp t) {
  return floor_div(t.minutes() - origin.minutes(), 60);
}

}  // namespace stormrider
