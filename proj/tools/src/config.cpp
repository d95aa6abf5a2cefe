#include "fpcaload/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"

namespace fpcaload::cli {

namespace {

std::size_t to_count(const std::string &key, const std::string &value) {
  try {
    const long v = csv::parse_integer(value, key);
    if (v < 0) {
      throw ConfigError(key + " must be non-negative");
    }
    return static_cast<std::size_t>(v);
  } catch (const Error &) {
    throw ConfigError(key + " expects an integer, got '" + value + "'");
  }
}

double to_real(const std::string &key, const std::string &value) {
  try {
    return csv::parse_double(value, key);
  } catch (const Error &) {
    throw ConfigError(key + " expects a number, got '" + value + "'");
  }
}

DateRange to_range(const std::string &key, const std::string &value) {
  try {
    return parse_date_range(value);
  } catch (const Error &e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

} // namespace

std::filesystem::path RunConfig::curves_path() const {
  return curves.empty() ? output / "curves.csv" : curves;
}
std::filesystem::path RunConfig::forecast_path() const {
  return forecast.empty() ? output / "forecast.csv" : forecast;
}
std::filesystem::path RunConfig::actual_path() const {
  return actual.empty() ? output / "curves.csv" : actual;
}

void RunConfig::validate() const {
  if (train_range && test_range) {
    const bool disjoint = day_number(train_range->last) < day_number(test_range->first) ||
                          day_number(test_range->last) < day_number(train_range->first);
    if (!disjoint) {
      throw ConfigError("training and test ranges overlap");
    }
  }
  if (components && fit_components && *components > *fit_components) {
    throw ConfigError("components (" + std::to_string(*components) +
                      ") exceeds fit_components (" + std::to_string(*fit_components) + ")");
  }
  if (!(temp_bin > 0.0) || !(rh_bin > 0.0)) {
    throw ConfigError("bin widths must be positive");
  }
}

TimeGrid grid_from_name(const std::string &name) {
  if (name == "hourly") {
    return TimeGrid::uniform(24);
  }
  if (name == "half-hourly") {
    return TimeGrid::uniform(48);
  }
  if (name == "two-hourly") {
    return TimeGrid::uniform(12);
  }
  if (name == "quarter-hourly") {
    return TimeGrid::uniform(96);
  }
  try {
    const long m = csv::parse_integer(name, "grid");
    if (m >= 2 && m <= 1440) {
      return TimeGrid::uniform(static_cast<std::size_t>(m));
    }
  } catch (const Error &) {
  }
  throw ConfigError("unknown grid '" + name +
                    "' (hourly, half-hourly, two-hourly, quarter-hourly or a point count)");
}

void apply_setting(RunConfig &c, const std::string &key, const std::string &value,
                   const std::filesystem::path &base) {
  if (key == "measurements") {
    c.measurements = resolve(base, value);
  } else if (key == "contracts") {
    c.contracts = resolve(base, value);
  } else if (key == "weather") {
    c.weather = resolve(base, value);
  } else if (key == "events") {
    c.events = resolve(base, value);
  } else if (key == "population_rules") {
    c.population_rules = resolve(base, value);
  } else if (key == "regions") {
    c.regions = resolve(base, value);
  } else if (key == "eunite_load") {
    c.eunite_load = resolve(base, value);
  } else if (key == "curves") {
    c.curves = resolve(base, value);
  } else if (key == "forecast") {
    c.forecast = resolve(base, value);
  } else if (key == "actual") {
    c.actual = resolve(base, value);
  } else if (key == "model") {
    c.models.push_back(resolve(base, value));
  } else if (key == "output") {
    c.output = resolve(base, value);
  } else if (key == "grid") {
    grid_from_name(value);
    c.grid = value;
  } else if (key == "train_range") {
    c.train_range = to_range(key, value);
  } else if (key == "test_range") {
    c.test_range = to_range(key, value);
  } else if (key == "components") {
    c.components = to_count(key, value);
  } else if (key == "fit_components") {
    c.fit_components = to_count(key, value);
    if (*c.fit_components == 0) {
      throw ConfigError("fit_components must be at least 1");
    }
  } else if (key == "entity") {
    c.entity = value;
  } else if (key == "min_days") {
    c.filter.min_days = to_count(key, value);
  } else if (key == "max_incomplete_fraction") {
    c.filter.max_incomplete_fraction = to_real(key, value);
  } else if (key == "max_corrupted_fraction") {
    c.filter.max_corrupted_fraction = to_real(key, value);
  } else if (key == "temp_bin") {
    c.temp_bin = to_real(key, value);
  } else if (key == "rh_bin") {
    c.rh_bin = to_real(key, value);
  } else if (key == "nmse_form") {
    if (value == "actual_variance") {
      c.nmse_form = NmseForm::ActualVariance;
    } else if (value == "mean_product") {
      c.nmse_form = NmseForm::MeanProduct;
    } else {
      throw ConfigError("nmse_form must be actual_variance or mean_product");
    }
  } else if (key == "skip_missing_actual") {
    if (value == "true" || value == "1") {
      c.skip_missing_actual = true;
    } else if (value == "false" || value == "0") {
      c.skip_missing_actual = false;
    } else {
      throw ConfigError("skip_missing_actual must be true or false");
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void apply_config_text(RunConfig &config, const std::string &text,
                       const std::filesystem::path &base_dir, const std::string &source) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
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
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(config, std::string(csv::trim(line.substr(0, eq))),
                    std::string(csv::trim(line.substr(eq + 1))), base_dir);
    } catch (const ConfigError &e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig &config, const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str(), path.parent_path(), path.string());
}

} // namespace fpcaload::cli
