#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fpcaload::cli {

/// Linear-interpolation quantile (type 7) of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double prob);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Throws Error{EmptySet} for an empty sample.
FiveNumber five_number(std::span<const double> sample);

/// Fixed-width bins starting at floor(min / width) * width and extending
/// until the last bin holds the maximum.
struct BinEdges {
  double origin = 0.0;
  double width = 1.0;
  std::size_t count = 0;

  double lower(std::size_t i) const { return origin + static_cast<double>(i) * width; }
  double upper(std::size_t i) const { return lower(i + 1); }
  std::size_t index_of(double x) const;
};

BinEdges make_bins(std::span<const double> values, double width);

struct WeatherCell {
  std::size_t temp_bin = 0;
  std::size_t rh_bin = 0;
  std::size_t count = 0;
  std::optional<double> mean; // empty for cells without observations
};

struct WeatherGrid {
  BinEdges temp;
  BinEdges rh;
  std::vector<WeatherCell> cells; // temperature-major, every cell present
};

/// Mean score per temperature x humidity cell. Inputs must have equal length.
WeatherGrid weather_grid(std::span<const double> temp, std::span<const double> rh,
                         std::span<const double> score, double temp_width, double rh_width);

} // namespace fpcaload::cli
