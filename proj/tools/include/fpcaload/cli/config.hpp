#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpcaload/calendar.hpp"
#include "fpcaload/curves.hpp"
#include "fpcaload/metrics.hpp"
#include "fpcaload/pipeline.hpp"

namespace fpcaload::cli {

/// Invalid configuration or command line; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path measurements;
  std::filesystem::path contracts;
  std::filesystem::path weather;
  std::filesystem::path events;
  std::filesystem::path population_rules;
  std::filesystem::path regions;
  std::filesystem::path eunite_load;
  std::filesystem::path curves;   // default <output>/curves.csv
  std::filesystem::path forecast; // default <output>/forecast.csv
  std::filesystem::path actual;   // default <output>/curves.csv
  std::vector<std::filesystem::path> models;
  std::filesystem::path output = "fpcaload-out";

  std::string grid = "hourly";
  std::optional<DateRange> train_range;
  std::optional<DateRange> test_range;
  std::optional<std::size_t> components;     // K, components forecast
  std::optional<std::size_t> fit_components; // p, components kept in the basis
  std::optional<std::string> entity;

  FilterOptions filter;
  double temp_bin = 2.5;
  double rh_bin = 10.0;
  NmseForm nmse_form = NmseForm::ActualVariance;
  /// evaluate: skip forecast dates absent from the actuals (listed as a
  /// warning) instead of failing with Misalignment.
  bool skip_missing_actual = false;

  std::filesystem::path curves_path() const;
  std::filesystem::path forecast_path() const;
  std::filesystem::path actual_path() const;

  /// Throws ConfigError when training and test ranges overlap or K > p.
  void validate() const;
};

/// Applies `key = value` lines to `config`. Relative paths resolve against
/// `base_dir`. Unknown keys are rejected.
void apply_config_text(RunConfig &config, const std::string &text,
                       const std::filesystem::path &base_dir,
                       const std::string &source = "<config>");
void apply_config_file(RunConfig &config, const std::filesystem::path &path);

/// Sets one key; shared by the config file and command-line overrides.
void apply_setting(RunConfig &config, const std::string &key, const std::string &value,
                   const std::filesystem::path &base_dir);

/// hourly (24), half-hourly (48), two-hourly (12), quarter-hourly (96) or a
/// plain point count.
TimeGrid grid_from_name(const std::string &name);

} // namespace fpcaload::cli
