#include "fpcaload/cli/report.hpp"

#include <algorithm>
#include <cmath>

#include "fpcaload/error.hpp"

namespace fpcaload::cli {

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) {
    throw Error(ErrorCode::EmptySet, "quantile of an empty sample");
  }
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(prob, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

FiveNumber five_number(std::span<const double> sample) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  return {quantile_sorted(s, 0.0), quantile_sorted(s, 0.25), quantile_sorted(s, 0.5),
          quantile_sorted(s, 0.75), quantile_sorted(s, 1.0)};
}

std::size_t BinEdges::index_of(double x) const {
  const double k = std::floor((x - origin) / width);
  if (k < 0.0) {
    return 0;
  }
  return std::min(static_cast<std::size_t>(k), count - 1);
}

BinEdges make_bins(std::span<const double> values, double width) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptySet, "no values to bin");
  }
  if (!(width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  BinEdges edges;
  edges.width = width;
  edges.origin = std::floor(*lo / width) * width;
  edges.count = static_cast<std::size_t>(std::floor((*hi - edges.origin) / width)) + 1;
  return edges;
}

WeatherGrid weather_grid(std::span<const double> temp, std::span<const double> rh,
                         std::span<const double> score, double temp_width, double rh_width) {
  if (temp.size() != rh.size() || temp.size() != score.size()) {
    throw Error(ErrorCode::Misalignment, "weather and score series differ in length");
  }
  WeatherGrid grid;
  grid.temp = make_bins(temp, temp_width);
  grid.rh = make_bins(rh, rh_width);
  std::vector<double> sums(grid.temp.count * grid.rh.count, 0.0);
  std::vector<std::size_t> counts(sums.size(), 0);
  for (std::size_t i = 0; i < temp.size(); ++i) {
    const std::size_t cell = grid.temp.index_of(temp[i]) * grid.rh.count + grid.rh.index_of(rh[i]);
    sums[cell] += score[i];
    ++counts[cell];
  }
  grid.cells.reserve(sums.size());
  for (std::size_t t = 0; t < grid.temp.count; ++t) {
    for (std::size_t r = 0; r < grid.rh.count; ++r) {
      const std::size_t cell = t * grid.rh.count + r;
      WeatherCell c{t, r, counts[cell], std::nullopt};
      if (counts[cell] > 0) {
        c.mean = sums[cell] / static_cast<double>(counts[cell]);
      }
      grid.cells.push_back(c);
    }
  }
  return grid;
}

} // namespace fpcaload::cli
