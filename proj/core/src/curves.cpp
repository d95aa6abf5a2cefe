#include "fpcaload/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpcaload/error.hpp"

namespace fpcaload {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a time grid needs at least 2 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double t = points_[i];
    if (!std::isfinite(t) || t < 0.0 || t >= 24.0) {
      throw Error(ErrorCode::InvalidArgument, "grid points must lie in [0, 24)");
    }
    if (i > 0 && t <= points_[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "grid points must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(std::size_t m) {
  std::vector<double> points(m);
  for (std::size_t i = 0; i < m; ++i) {
    points[i] = 24.0 * static_cast<double>(i) / static_cast<double>(m);
  }
  return TimeGrid(std::move(points));
}

std::optional<std::size_t> TimeGrid::slot_of(double hour) const {
  if (points_.empty() || hour < points_.front() || hour >= 24.0) {
    return std::nullopt;
  }
  const auto it = std::upper_bound(points_.begin(), points_.end(), hour);
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

CurveSet::CurveSet(TimeGrid grid, std::vector<DailyCurve> curves, std::optional<double> scale)
    : grid_(std::move(grid)), curves_(std::move(curves)), scale_(scale) {
  if (scale_ && !(std::isfinite(*scale_) && *scale_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  }
  std::stable_sort(curves_.begin(), curves_.end(), [](const DailyCurve &a, const DailyCurve &b) {
    return day_number(a.date) < day_number(b.date);
  });
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    const auto &c = curves_[i];
    if (c.values.size() != grid_.size()) {
      throw Error(ErrorCode::GridMismatch, "curve on " + format_date(c.date) + " has " +
                                               std::to_string(c.values.size()) +
                                               " samples, grid has " +
                                               std::to_string(grid_.size()));
    }
    if (!std::all_of(c.values.begin(), c.values.end(), [](double v) { return std::isfinite(v); })) {
      throw Error(ErrorCode::InvalidArgument, "non-finite sample on " + format_date(c.date));
    }
    if (c.entity_id != curves_.front().entity_id) {
      throw Error(ErrorCode::InvalidArgument, "curve set mixes entities '" +
                                                  curves_.front().entity_id + "' and '" +
                                                  c.entity_id + "'");
    }
    if (i > 0 && c.date == curves_[i - 1].date) {
      throw Error(ErrorCode::InvalidArgument, "duplicate date " + format_date(c.date));
    }
  }
}

const std::string &CurveSet::entity_id() const {
  static const std::string empty;
  return curves_.empty() ? empty : curves_.front().entity_id;
}

std::vector<Date> CurveSet::dates() const {
  std::vector<Date> out;
  out.reserve(curves_.size());
  for (const auto &c : curves_) {
    out.push_back(c.date);
  }
  return out;
}

CurveSet CurveSet::restricted_to(const DateRange &range) const {
  std::vector<DailyCurve> kept;
  for (const auto &c : curves_) {
    if (range.contains(c.date)) {
      kept.push_back(c);
    }
  }
  return CurveSet(grid_, std::move(kept), scale_);
}

bool CurveSet::has_negative_samples() const {
  return std::any_of(curves_.begin(), curves_.end(), [](const DailyCurve &c) {
    return std::any_of(c.values.begin(), c.values.end(), [](double v) { return v < 0.0; });
  });
}

CurveSet normalize_by_max(const CurveSet &set) {
  if (set.empty()) {
    throw Error(ErrorCode::EmptySet, "cannot normalize an empty curve set");
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto &c : set.curves()) {
    peak = std::max(peak, *std::max_element(c.values.begin(), c.values.end()));
  }
  if (!(peak > 0.0)) {
    throw Error(ErrorCode::ZeroScale, "maximum sample of '" + set.entity_id() + "' is not positive");
  }
  std::vector<DailyCurve> out = set.curves();
  for (auto &c : out) {
    for (auto &v : c.values) {
      v /= peak;
    }
  }
  // an already-normalized set composes its scale factors
  return CurveSet(set.grid(), std::move(out), set.scale().value_or(1.0) * peak);
}

CurveSet denormalize(const CurveSet &set) {
  if (!set.scale()) {
    throw Error(ErrorCode::NotNormalized, "curve set carries no scale factor");
  }
  const double scale = *set.scale();
  std::vector<DailyCurve> out = set.curves();
  for (auto &c : out) {
    for (auto &v : c.values) {
      v *= scale;
    }
  }
  return CurveSet(set.grid(), std::move(out));
}

} // namespace fpcaload
