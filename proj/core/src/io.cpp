#include "fpcaload/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"

namespace fpcaload::io {

namespace {

template <typename F>
auto at_row(const csv::Reader &reader, F &&parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const Error &e) {
    reader.fail(e.what());
  }
}

std::string squash(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::optional<EventKind> event_kind(std::string_view name) {
  const std::string s = squash(name);
  if (s.find("fashion") != std::string::npos) {
    return EventKind::FashionWeek;
  }
  if (s.find("expo") != std::string::npos) {
    return EventKind::Expo;
  }
  if (s.find("design") != std::string::npos) {
    return EventKind::DesignFestival;
  }
  return std::nullopt;
}

} // namespace

std::vector<MeasurementRecord> read_measurements(const std::filesystem::path &path) {
  csv::Reader reader(path, {"entity_id", "timestamp", "power_kw"});
  std::vector<MeasurementRecord> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f[0].empty()) {
      reader.fail("empty entity_id");
    }
    out.push_back({f[0], at_row(reader, [&] { return parse_local_datetime(f[1]); }),
                   csv::parse_double(f[2], reader.where())});
  }
  return out;
}

std::vector<ContractSnapshot> read_contracts(const std::filesystem::path &path) {
  csv::Reader reader(path, {"entity_id", "start_date", "end_date", "contract_kw", "frac_res",
                            "frac_plt", "gen_kw", "frac_pv"});
  std::vector<ContractSnapshot> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ContractSnapshot s;
    s.entity_id = f[0];
    s.period = at_row(reader, [&] {
      DateRange r{parse_date(f[1]), parse_date(f[2])};
      if (day_number(r.last) < day_number(r.first)) {
        throw Error(ErrorCode::Parse, "contract period ends before it starts");
      }
      return r;
    });
    const auto w = reader.where();
    s.contract_kw = csv::parse_double(f[3], w);
    s.frac_residential = csv::parse_double(f[4], w);
    s.frac_public_lighting = csv::parse_double(f[5], w);
    s.generation_kw = csv::parse_double(f[6], w);
    s.frac_pv = csv::parse_double(f[7], w);
    for (double frac : {s.frac_residential, s.frac_public_lighting, s.frac_pv}) {
      if (frac < 0.0 || frac > 1.0) {
        reader.fail("fractions must lie in [0, 1]");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<WeatherReading> read_weather(const std::filesystem::path &path) {
  csv::Reader reader(path,
                     {"station_id", "timestamp", "temp_c", "rh_pct", "radiation", "rainfall", "wind"});
  std::vector<WeatherReading> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto w = reader.where();
    WeatherReading r;
    r.station_id = f[0];
    r.timestamp = at_row(reader, [&] { return parse_local_datetime(f[1]); });
    r.temperature_c = csv::parse_optional_double(f[2], w);
    r.relative_humidity = csv::parse_optional_double(f[3], w);
    r.radiation = csv::parse_optional_double(f[4], w);
    r.rainfall = csv::parse_optional_double(f[5], w);
    r.wind_speed = csv::parse_optional_double(f[6], w);
    if (r.relative_humidity && (*r.relative_humidity < 0.0 || *r.relative_humidity > 100.0)) {
      reader.fail("relative humidity outside [0, 100]");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EventRange> read_events(const std::filesystem::path &path) {
  csv::Reader reader(path, {"event_name", "start_date", "end_date"});
  std::vector<EventRange> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto kind = event_kind(f[0]);
    if (!kind) {
      reader.fail("unknown event '" + f[0] + "' (expected fashion week, expo or design festival)");
    }
    const DateRange r = at_row(reader, [&] { return parse_date_range(f[1] + ":" + f[2]); });
    out.push_back({*kind, r});
  }
  return out;
}

std::map<std::string, std::string> read_region_map(const std::filesystem::path &path) {
  csv::Reader reader(path, {"entity_id", "region"});
  std::map<std::string, std::string> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f[0].empty() || f[1].empty()) {
      reader.fail("empty entity or region");
    }
    if (!out.emplace(f[0], f[1]).second) {
      reader.fail("entity '" + f[0] + "' mapped twice");
    }
  }
  return out;
}

PopulationRules parse_population_rules(const std::string &text, const std::string &source) {
  PopulationRules out;
  std::vector<std::string> order;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;

  const auto fail = [&](const std::string &msg) -> Error {
    return Error(ErrorCode::Parse, source + ":" + std::to_string(line_no) + ": " + msg);
  };
  const auto rule_named = [&](const std::string &name) -> PopulationRule & {
    for (auto &r : out.rules) {
      if (r.name == name) {
        return r;
      }
    }
    out.rules.push_back(PopulationRule{name, {}, CorruptionRule::AnyZeroSample, true});
    return out.rules.back();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = csv::trim(line);
    if (line.empty()) {
      continue;
    }
    std::size_t op_pos = line.find_first_of("<>=");
    if (op_pos == std::string_view::npos) {
      throw fail("expected 'key = value' or 'RULE.characteristic OP value'");
    }
    std::size_t op_len = (op_pos + 1 < line.size() && line[op_pos + 1] == '=') ? 2 : 1;
    const std::string key(csv::trim(line.substr(0, op_pos)));
    const std::string op(line.substr(op_pos, op_len));
    const std::string value(csv::trim(line.substr(op_pos + op_len)));

    if (key == "order") {
      if (op != "=") {
        throw fail("order must use '='");
      }
      for (const auto &name : csv::split(value)) {
        if (!name.empty()) {
          order.push_back(name);
          rule_named(name);
        }
      }
      continue;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
      throw fail("expected RULE.field, got '" + key + "'");
    }
    PopulationRule &rule = rule_named(key.substr(0, dot));
    const std::string field = key.substr(dot + 1);
    if (field == "corruption") {
      const auto c = parse_corruption_rule(value);
      if (op != "=" || !c) {
        throw fail("corruption must be any_zero_sample, all_day_zero or none");
      }
      rule.corruption = *c;
    } else if (field == "classify") {
      if (op != "=" || (value != "true" && value != "false")) {
        throw fail("classify must be true or false");
      }
      rule.classifiable = value == "true";
    } else if (const auto c = parse_characteristic(field)) {
      Threshold t;
      t.characteristic = *c;
      if (op == ">=") {
        t.op = Threshold::Op::Ge;
      } else if (op == ">") {
        t.op = Threshold::Op::Gt;
      } else if (op == "<=") {
        t.op = Threshold::Op::Le;
      } else if (op == "<") {
        t.op = Threshold::Op::Lt;
      } else {
        throw fail("threshold operator must be one of >=, >, <=, <");
      }
      try {
        t.value = csv::parse_double(value, source + ":" + std::to_string(line_no));
      } catch (const Error &e) {
        throw Error(ErrorCode::Parse, e.what());
      }
      rule.thresholds.push_back(t);
    } else {
      throw fail("unknown field '" + field + "'");
    }
  }

  // declared order first, then rules in order of appearance
  std::vector<PopulationRule> ordered;
  for (const auto &name : order) {
    const auto it = std::find_if(out.rules.begin(), out.rules.end(),
                                 [&](const PopulationRule &r) { return r.name == name; });
    if (it != out.rules.end() && std::none_of(ordered.begin(), ordered.end(), [&](const auto &r) {
          return r.name == name;
        })) {
      ordered.push_back(*it);
    }
  }
  for (const auto &r : out.rules) {
    if (std::none_of(ordered.begin(), ordered.end(), [&](const auto &o) { return o.name == r.name; })) {
      ordered.push_back(r);
    }
  }
  out.rules = std::move(ordered);
  return out;
}

PopulationRules read_population_rules(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_population_rules(buf.str(), path.string());
}

} // namespace fpcaload::io
