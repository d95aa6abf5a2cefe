#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpcaload/calendar.hpp"

namespace fpcaload {

/// Intra-day sampling instants in hours, strictly increasing in [0, 24).
/// Spacing may be non-uniform; every curve in a set shares one grid.
class TimeGrid {
public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> points);

  /// `m` evenly spaced points starting at 0 (24 -> hourly, 48 -> half-hourly).
  static TimeGrid uniform(std::size_t m);
  static TimeGrid hourly() { return uniform(24); }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double> &points() const noexcept { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }

  /// Index of the grid interval [t_j, t_{j+1}) holding `hour`, the last
  /// interval extending to 24. Empty when `hour` precedes the first point.
  std::optional<std::size_t> slot_of(double hour) const;

  bool operator==(const TimeGrid &) const = default;

private:
  std::vector<double> points_;
};

struct DailyCurve {
  Date date;
  std::vector<double> values;
  std::string entity_id;
};

/// Date-ordered curves of one entity on a common grid, optionally carrying
/// the scale factor (kW) that was divided out by normalization.
class CurveSet {
public:
  CurveSet() = default;
  /// Sorts curves by date and validates: equal lengths matching the grid,
  /// finite values, unique dates, one entity id, positive scale if present.
  CurveSet(TimeGrid grid, std::vector<DailyCurve> curves,
           std::optional<double> scale = std::nullopt);

  const TimeGrid &grid() const noexcept { return grid_; }
  const std::vector<DailyCurve> &curves() const noexcept { return curves_; }
  const std::optional<double> &scale() const noexcept { return scale_; }
  bool normalized() const noexcept { return scale_.has_value(); }

  std::size_t size() const noexcept { return curves_.size(); }
  bool empty() const noexcept { return curves_.empty(); }
  const DailyCurve &operator[](std::size_t i) const { return curves_[i]; }

  /// Entity of the first curve; empty string for an empty set.
  const std::string &entity_id() const;
  std::vector<Date> dates() const;

  /// Curves whose date lies in `range`, same grid and scale.
  CurveSet restricted_to(const DateRange &range) const;

  /// True when any stored sample is negative (e.g. net-generating stations).
  bool has_negative_samples() const;

private:
  TimeGrid grid_;
  std::vector<DailyCurve> curves_;
  std::optional<double> scale_;
};

/// Divides every sample by the global maximum of the set and records it.
CurveSet normalize_by_max(const CurveSet &set);

/// Multiplies every sample by the recorded scale factor and clears it.
CurveSet denormalize(const CurveSet &set);

} // namespace fpcaload
