#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpcaload::csv {

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view line, char separator = ',');

/// Parses a finite double; throws Error{Parse} mentioning `where`.
double parse_double(std::string_view text, const std::string &where);
/// Empty cell -> nullopt.
std::optional<double> parse_optional_double(std::string_view text, const std::string &where);
long parse_integer(std::string_view text, const std::string &where);

/// Shortest round-trippable decimal with `significant` digits (%.*g).
std::string format_number(double value, int significant = 12);

/// Line-oriented reader for comma-separated files with a fixed header.
/// Blank lines are skipped; a completely empty file yields no rows.
class Reader {
public:
  Reader(const std::filesystem::path &path, std::vector<std::string> expected_header);

  /// Next data row, split and trimmed. Rows whose field count differs from
  /// the header throw Error{Parse}.
  bool next(std::vector<std::string> &fields);

  std::size_t line() const noexcept { return line_; }
  /// "file:line" of the most recently read row.
  std::string where() const;
  [[noreturn]] void fail(const std::string &message) const;

private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::size_t columns_ = 0;
};

} // namespace fpcaload::csv
