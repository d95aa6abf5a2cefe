#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fpcaload/curves.hpp"

namespace fpcaload {

/// Fitted principal-component basis of a set of daily curves.
///
/// `components` holds one orthonormal eigenvector per column (m x p),
/// ordered by non-increasing eigenvalue. Each column is sign-normalized so
/// that its entry of largest magnitude is positive, the earliest index
/// winning ties. `total_variance` is the sum of all m clamped eigenvalues of
/// the sample covariance, so explained-variability ratios use the full
/// spectrum even when only p components are kept.
struct FpcaModel {
  TimeGrid grid;
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;
  Eigen::VectorXd eigenvalues;
  double total_variance = 0.0;
  std::size_t n_train = 0;
  bool rank_deficient = false;
  std::string entity_id;
  std::optional<double> scale;

  std::size_t p() const noexcept { return static_cast<std::size_t>(components.cols()); }
  std::size_t m() const noexcept { return grid.size(); }
};

/// Per-day component scores, one row per date and one column per component.
struct ScoreMatrix {
  Eigen::MatrixXd scores;
  std::vector<Date> dates;
};

struct FpcaFit {
  FpcaModel model;
  ScoreMatrix scores;
};

Eigen::VectorXd mean_curve(const CurveSet &set);

/// Sample covariance with denominator n - 1. Requires n >= 2.
Eigen::MatrixXd covariance(const CurveSet &set);

/// Eigendecomposition of the sample covariance keeping the top `p`
/// components. A single curve or a zero-variance set yields zero
/// eigenvalues and zero scores instead of an error; `p` above the numerical
/// rank is allowed and flagged through `rank_deficient`.
FpcaFit fit(const CurveSet &set, std::size_t p);

Eigen::VectorXd project(const FpcaModel &model, const TimeGrid &grid,
                        std::span<const double> values);
ScoreMatrix project(const FpcaModel &model, const CurveSet &set);

/// mean + sum_{k < truncation} scores[k] * component_k
Eigen::VectorXd reconstruct(const FpcaModel &model, std::span<const double> scores,
                            std::size_t truncation);

/// Cumulative share of variance carried by the first `p` components.
double explained_variability(const FpcaModel &model, std::size_t p);

} // namespace fpcaload
