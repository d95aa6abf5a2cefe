#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace fpcaload {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws Error{Parse} on malformed or invalid dates.
Date parse_date(std::string_view text);
std::string format_date(const Date &date);

Date make_date(int year, unsigned month, unsigned day);
int day_number(const Date &date); // days since 1970-01-01
Date from_day_number(int days);
int days_between(const Date &from, const Date &to);
Date add_days(const Date &date, int days);

/// ISO weekday: 1 = Monday ... 7 = Sunday.
unsigned iso_weekday(const Date &date);

/// Inclusive date range.
struct DateRange {
  Date first;
  Date last;

  bool contains(const Date &d) const {
    return day_number(d) >= day_number(first) && day_number(d) <= day_number(last);
  }
  int length_days() const { return days_between(first, last) + 1; }
};

/// `YYYY-MM-DD:YYYY-MM-DD` (inclusive on both ends).
DateRange parse_date_range(std::string_view text);
std::string format_date_range(const DateRange &range);

/// Wall-clock local time with an optional UTC offset in minutes.
struct LocalDateTime {
  Date date;
  int minute_of_day = 0; // [0, 1440)
  int second = 0;
  std::optional<int> utc_offset_minutes;

  double hour() const { return minute_of_day / 60.0 + second / 3600.0; }
};

/// Chronological by wall clock, then by offset (absent first).
bool operator<(const LocalDateTime &a, const LocalDateTime &b);
bool operator==(const LocalDateTime &a, const LocalDateTime &b);

/// Accepts `YYYY-MM-DDTHH:MM[:SS][Z|+HH:MM|-HH:MM]` with `T` or a space.
LocalDateTime parse_local_datetime(std::string_view text);
std::string format_local_datetime(const LocalDateTime &t);

/// European Union daylight-saving rules (last Sunday of March/October,
/// transition at 01:00 UTC, i.e. 02:00 local standard time for CET).
bool is_spring_forward_day(const Date &date);
bool is_fall_back_day(const Date &date);

/// Local wall-clock minute skipped by the spring-forward transition.
bool is_nonexistent_local_time(const Date &date, int minute_of_day);
/// Local wall-clock minute that occurs twice on the fall-back day.
bool is_repeated_local_time(const Date &date, int minute_of_day);

} // namespace fpcaload
