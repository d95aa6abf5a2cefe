#include "fpcaload/calendar.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <tuple>

#include "fpcaload/error.hpp"

namespace fpcaload {

namespace chr = std::chrono;

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int &out) {
  if (pos + len > text.size()) {
    return false;
  }
  const char *first = text.data() + pos;
  const char *last = first + len;
  for (const char *c = first; c != last; ++c) {
    if (*c < '0' || *c > '9') {
      return false;
    }
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

Date last_sunday(int year, unsigned month) {
  const chr::year_month_weekday_last ymwl{chr::year{year}, chr::month{month},
                                          chr::weekday_last{chr::Sunday}};
  return Date{chr::sys_days{ymwl}};
}

constexpr int kTransitionStart = 2 * 60;
constexpr int kTransitionEnd = 3 * 60;

} // namespace

Date make_date(int year, unsigned month, unsigned day) {
  Date d{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!d.ok()) {
    throw Error(ErrorCode::InvalidArgument, "invalid calendar date");
  }
  return d;
}

Date parse_date(std::string_view text) {
  int y = 0;
  int m = 0;
  int d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
    throw Error(ErrorCode::Parse, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  Date date{chr::year{y}, chr::month{static_cast<unsigned>(m)},
            chr::day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw Error(ErrorCode::Parse, "not a calendar date: '" + std::string(text) + "'");
  }
  return date;
}

std::string format_date(const Date &date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

int day_number(const Date &date) {
  return static_cast<int>(chr::sys_days{date}.time_since_epoch().count());
}

Date from_day_number(int days) { return Date{chr::sys_days{chr::days{days}}}; }

int days_between(const Date &from, const Date &to) { return day_number(to) - day_number(from); }

Date add_days(const Date &date, int days) { return from_day_number(day_number(date) + days); }

unsigned iso_weekday(const Date &date) {
  return chr::weekday{chr::sys_days{date}}.iso_encoding();
}

DateRange parse_date_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::Parse,
                "expected YYYY-MM-DD:YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  DateRange range{parse_date(text.substr(0, colon)), parse_date(text.substr(colon + 1))};
  if (day_number(range.last) < day_number(range.first)) {
    throw Error(ErrorCode::Parse, "date range ends before it starts: '" + std::string(text) + "'");
  }
  return range;
}

std::string format_date_range(const DateRange &range) {
  return format_date(range.first) + ":" + format_date(range.last);
}

LocalDateTime parse_local_datetime(std::string_view text) {
  auto bad = [&]() -> Error {
    return Error(ErrorCode::Parse, "expected ISO-8601 local timestamp, got '" +
                                       std::string(text) + "'");
  };
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ')) {
    throw bad();
  }
  LocalDateTime t;
  try {
    t.date = parse_date(text.substr(0, 10));
  } catch (const Error &) {
    throw bad();
  }
  int hh = 0;
  int mm = 0;
  if (!read_int(text, 11, 2, hh) || text[13] != ':' || !read_int(text, 14, 2, mm) || hh > 23 ||
      mm > 59) {
    throw bad();
  }
  std::size_t pos = 16;
  int ss = 0;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_int(text, pos + 1, 2, ss) || ss > 59) {
      throw bad();
    }
    pos += 3;
    // fractional seconds are truncated
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        ++pos;
      }
    }
  }
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      t.utc_offset_minutes = 0;
    } else if ((text[pos] == '+' || text[pos] == '-') && text.size() == pos + 6 &&
               text[pos + 3] == ':') {
      int oh = 0;
      int om = 0;
      if (!read_int(text, pos + 1, 2, oh) || !read_int(text, pos + 4, 2, om)) {
        throw bad();
      }
      const int offset = oh * 60 + om;
      t.utc_offset_minutes = text[pos] == '-' ? -offset : offset;
    } else {
      throw bad();
    }
  }
  t.minute_of_day = hh * 60 + mm;
  t.second = ss;
  return t;
}

std::string format_local_datetime(const LocalDateTime &t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d", format_date(t.date).c_str(),
                t.minute_of_day / 60, t.minute_of_day % 60, t.second);
  std::string out = buf;
  if (t.utc_offset_minutes) {
    const int off = *t.utc_offset_minutes;
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", off < 0 ? '-' : '+', std::abs(off) / 60,
                  std::abs(off) % 60);
    out += buf;
  }
  return out;
}

namespace {
auto ordering_key(const LocalDateTime &t) {
  return std::tuple(day_number(t.date), t.minute_of_day, t.second, t.utc_offset_minutes.has_value(),
                    t.utc_offset_minutes.value_or(0));
}
} // namespace

bool operator<(const LocalDateTime &a, const LocalDateTime &b) {
  return ordering_key(a) < ordering_key(b);
}

bool operator==(const LocalDateTime &a, const LocalDateTime &b) {
  return ordering_key(a) == ordering_key(b);
}

bool is_spring_forward_day(const Date &date) {
  return static_cast<unsigned>(date.month()) == 3u &&
         date == last_sunday(static_cast<int>(date.year()), 3);
}

bool is_fall_back_day(const Date &date) {
  return static_cast<unsigned>(date.month()) == 10u &&
         date == last_sunday(static_cast<int>(date.year()), 10);
}

bool is_nonexistent_local_time(const Date &date, int minute_of_day) {
  return is_spring_forward_day(date) && minute_of_day >= kTransitionStart &&
         minute_of_day < kTransitionEnd;
}

bool is_repeated_local_time(const Date &date, int minute_of_day) {
  return is_fall_back_day(date) && minute_of_day >= kTransitionStart &&
         minute_of_day < kTransitionEnd;
}

} // namespace fpcaload
