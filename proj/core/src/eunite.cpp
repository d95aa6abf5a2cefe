#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>

#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"
#include "fpcaload/io.hpp"

namespace fpcaload::io {

namespace {

constexpr std::size_t kHalfHours = 48;

std::vector<std::string> tokenize(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ';' || c == '\t' || c == ' ' || c == '\r') {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    out.push_back(std::move(cur));
  }
  return out;
}

bool is_number(const std::string &s) {
  try {
    csv::parse_double(s, "");
    return true;
  } catch (const Error &) {
    return false;
  }
}

std::optional<Date> parse_date_token(const std::string &s) {
  try {
    if (s.size() == 10 && s[4] == '-') {
      return parse_date(s);
    }
    if (s.size() == 8 && std::all_of(s.begin(), s.end(), ::isdigit)) {
      return make_date(std::stoi(s.substr(0, 4)), static_cast<unsigned>(std::stoi(s.substr(4, 2))),
                       static_cast<unsigned>(std::stoi(s.substr(6, 2))));
    }
    const auto a = s.find('/');
    const auto b = a == std::string::npos ? a : s.find('/', a + 1);
    if (b != std::string::npos) {
      const int month = std::stoi(s.substr(0, a));
      const int day = std::stoi(s.substr(a + 1, b - a - 1));
      int year = std::stoi(s.substr(b + 1));
      if (year < 100) {
        year += 1900;
      }
      return make_date(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    }
  } catch (const std::exception &) {
  }
  return std::nullopt;
}

} // namespace

CurveSet read_eunite_load(const std::filesystem::path &path, EuniteGrid grid,
                          const std::string &entity_id) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  const std::size_t m = grid == EuniteGrid::HalfHourly48 ? kHalfHours : kHalfHours / 4;
  std::vector<DailyCurve> curves;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string &msg) {
    throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) {
      continue;
    }
    const bool numeric_tail = std::any_of(tokens.begin() + 1, tokens.end(), is_number);
    std::optional<Date> date;
    std::size_t first_value = 0;
    if (tokens.size() == kHalfHours + 3 && is_number(tokens[0]) && is_number(tokens[1]) &&
        is_number(tokens[2])) {
      try {
        date = make_date(std::stoi(tokens[0]), static_cast<unsigned>(std::stoi(tokens[1])),
                         static_cast<unsigned>(std::stoi(tokens[2])));
      } catch (const std::exception &) {
        fail("invalid year/month/day columns");
      }
      first_value = 3;
    } else if (tokens.size() == kHalfHours + 1) {
      date = parse_date_token(tokens[0]);
      first_value = 1;
    }
    if (!date) {
      if (!numeric_tail && !parse_date_token(tokens[0])) {
        continue; // header row
      }
      fail("expected a date followed by 48 half-hourly loads, found " +
           std::to_string(tokens.size()) + " fields");
    }
    std::vector<double> half_hours(kHalfHours);
    for (std::size_t k = 0; k < kHalfHours; ++k) {
      half_hours[k] = csv::parse_double(tokens[first_value + k],
                                        path.string() + ":" + std::to_string(line_no));
    }
    DailyCurve curve{*date, {}, entity_id};
    if (m == kHalfHours) {
      curve.values = std::move(half_hours);
    } else {
      curve.values.assign(m, 0.0);
      for (std::size_t k = 0; k < kHalfHours; ++k) {
        curve.values[k / 4] += half_hours[k] / 4.0;
      }
    }
    curves.push_back(std::move(curve));
  }
  try {
    return CurveSet(TimeGrid::uniform(m), std::move(curves));
  } catch (const Error &e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

} // namespace fpcaload::io
