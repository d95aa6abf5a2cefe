#include "fpcaload/cli/curve_io.hpp"

#include <fstream>
#include <set>

#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"

namespace fpcaload::cli {

void write_curves_csv(const std::filesystem::path &path,
                      const std::map<std::string, CurveSet> &sets) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
  out << "entity_id,date,time,power_kw\n";
  for (const auto &[entity, set] : sets) {
    const auto &points = set.grid().points();
    for (const auto &c : set.curves()) {
      const std::string date = format_date(c.date);
      for (std::size_t k = 0; k < points.size(); ++k) {
        out << entity << ',' << date << ',' << csv::format_number(points[k]) << ','
            << csv::format_number(c.values[k]) << '\n';
      }
    }
  }
}

std::map<std::string, CurveSet> read_curves_csv(const std::filesystem::path &path) {
  csv::Reader reader(path, {"entity_id", "date", "time", "power_kw"});
  // entity -> date -> time -> value
  std::map<std::string, std::map<int, std::map<double, double>>> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f[0].empty()) {
      reader.fail("empty entity_id");
    }
    Date date;
    try {
      date = parse_date(f[1]);
    } catch (const Error &e) {
      reader.fail(e.what());
    }
    const double t = csv::parse_double(f[2], reader.where());
    const double v = csv::parse_double(f[3], reader.where());
    if (!rows[f[0]][day_number(date)].emplace(t, v).second) {
      reader.fail("duplicate row for " + f[0] + " " + f[1] + " time " + f[2]);
    }
  }

  std::map<std::string, CurveSet> out;
  for (const auto &[entity, by_date] : rows) {
    std::set<double> times;
    for (const auto &[day, values] : by_date) {
      for (const auto &[t, v] : values) {
        times.insert(t);
      }
    }
    TimeGrid grid;
    try {
      grid = TimeGrid(std::vector<double>(times.begin(), times.end()));
    } catch (const Error &e) {
      throw Error(ErrorCode::Parse, path.string() + ": entity '" + entity + "': " + e.what());
    }
    std::vector<DailyCurve> curves;
    for (const auto &[day, values] : by_date) {
      if (values.size() != grid.size()) {
        throw Error(ErrorCode::Parse, path.string() + ": entity '" + entity + "' on " +
                                          format_date(from_day_number(day)) + " has " +
                                          std::to_string(values.size()) + " of " +
                                          std::to_string(grid.size()) + " grid times");
      }
      DailyCurve c{from_day_number(day), {}, entity};
      for (const auto &[t, v] : values) {
        c.values.push_back(v);
      }
      curves.push_back(std::move(c));
    }
    out.emplace(entity, CurveSet(std::move(grid), std::move(curves)));
  }
  return out;
}

} // namespace fpcaload::cli
