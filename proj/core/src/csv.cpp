#include "fpcaload/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fpcaload/error.hpp"

namespace fpcaload::csv {

std::string_view trim(std::string_view text) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) {
    text.remove_prefix(1);
  }
  while (!text.empty() && is_space(text.back())) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string> split(std::string_view line, char separator) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(separator, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, const std::string &where) {
  const std::string s(trim(text));
  if (s.empty()) {
    throw Error(ErrorCode::Parse, where + ": empty numeric field");
  }
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, where + ": not a finite number: '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional_double(std::string_view text, const std::string &where) {
  if (trim(text).empty()) {
    return std::nullopt;
  }
  return parse_double(text, where);
}

long parse_integer(std::string_view text, const std::string &where) {
  const std::string s(trim(text));
  char *end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorCode::Parse, where + ": not an integer: '" + s + "'");
  }
  return v;
}

std::string format_number(double value, int significant) {
  if (value == 0.0) {
    return "0"; // avoids "-0"
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

Reader::Reader(const std::filesystem::path &path, std::vector<std::string> expected_header)
    : path_(path), in_(path), columns_(expected_header.size()) {
  if (!in_) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line_ == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto header = split(line);
    if (header != expected_header) {
      std::string want;
      for (const auto &h : expected_header) {
        want += (want.empty() ? "" : ",") + h;
      }
      fail("unexpected header, expected '" + want + "'");
    }
    return;
  }
}

bool Reader::next(std::vector<std::string> &fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) {
      continue;
    }
    fields = split(line);
    if (fields.size() != columns_) {
      fail("expected " + std::to_string(columns_) + " fields, found " +
           std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

std::string Reader::where() const { return path_.string() + ":" + std::to_string(line_); }

void Reader::fail(const std::string &message) const {
  throw Error(ErrorCode::Parse, where() + ": " + message);
}

} // namespace fpcaload::csv
