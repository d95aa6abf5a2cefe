#include "fpcaload/fpca.hpp"

#include <algorithm>
#include <cmath>

#include "fpcaload/error.hpp"

namespace fpcaload {

namespace {

constexpr double kClampRatio = 1e-12;
constexpr double kSignTieRatio = 1e-9;

Eigen::MatrixXd data_matrix(const CurveSet &set) {
  const auto n = static_cast<Eigen::Index>(set.size());
  const auto m = static_cast<Eigen::Index>(set.grid().size());
  Eigen::MatrixXd x(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(set[i].values.data(), m);
  }
  return x;
}

// Accumulates deviations from the first row so that identical rows give a
// mean equal to that row bit for bit.
Eigen::VectorXd column_mean(const Eigen::MatrixXd &x) {
  const Eigen::RowVectorXd anchor = x.row(0);
  const Eigen::RowVectorXd shift = (x.rowwise() - anchor).colwise().sum() / static_cast<double>(x.rows());
  return (anchor + shift).transpose();
}

Eigen::MatrixXd centered_covariance(const Eigen::MatrixXd &centered) {
  const double denom = static_cast<double>(centered.rows() - 1);
  Eigen::MatrixXd s = (centered.transpose() * centered) / denom;
  return (0.5 * (s + s.transpose())).eval();
}

void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= peak * (1.0 - kSignTieRatio)) {
      if (v[i] < 0.0) {
        v = -v;
      }
      return;
    }
  }
}

} // namespace

Eigen::VectorXd mean_curve(const CurveSet &set) {
  if (set.empty()) {
    throw Error(ErrorCode::EmptySet, "mean of an empty curve set");
  }
  return column_mean(data_matrix(set));
}

Eigen::MatrixXd covariance(const CurveSet &set) {
  if (set.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "covariance needs at least two curves");
  }
  const Eigen::MatrixXd x = data_matrix(set);
  const Eigen::VectorXd mu = column_mean(x);
  return centered_covariance(x.rowwise() - mu.transpose());
}

FpcaFit fit(const CurveSet &set, std::size_t p) {
  if (set.empty()) {
    throw Error(ErrorCode::EmptySet, "cannot fit an empty curve set");
  }
  const std::size_t m = set.grid().size();
  if (p == 0 || p > m) {
    throw Error(ErrorCode::InvalidArgument, "component count must lie in [1, " +
                                                std::to_string(m) + "], got " +
                                                std::to_string(p));
  }
  const auto mi = static_cast<Eigen::Index>(m);
  const auto pi = static_cast<Eigen::Index>(p);

  const Eigen::MatrixXd x = data_matrix(set);
  FpcaModel model;
  model.grid = set.grid();
  model.mean = column_mean(x);
  model.n_train = set.size();
  model.entity_id = set.entity_id();
  model.scale = set.scale();

  const Eigen::MatrixXd centered = x.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd s =
      set.size() >= 2 ? centered_covariance(centered) : Eigen::MatrixXd::Zero(mi, mi);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigendecomposition did not converge");
  }
  // Eigen returns ascending order; reverse to non-increasing.
  const Eigen::VectorXd values = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

  const double leading = std::max(values[0], 0.0);
  Eigen::VectorXd clamped(mi);
  for (Eigen::Index k = 0; k < mi; ++k) {
    clamped[k] = (leading == 0.0 || values[k] < kClampRatio * leading) ? 0.0 : values[k];
  }
  model.total_variance = clamped.sum();
  model.eigenvalues = clamped.head(pi);
  model.rank_deficient = (model.eigenvalues.array() == 0.0).any();

  model.components = vectors.leftCols(pi);
  for (Eigen::Index k = 0; k < pi; ++k) {
    apply_sign_convention(model.components.col(k));
  }

  FpcaFit result;
  result.scores.scores = centered * model.components;
  result.scores.dates = set.dates();
  result.model = std::move(model);
  return result;
}

Eigen::VectorXd project(const FpcaModel &model, const TimeGrid &grid,
                        std::span<const double> values) {
  if (!(grid == model.grid) || values.size() != model.m()) {
    throw Error(ErrorCode::GridMismatch, "curve grid does not match the model grid");
  }
  const Eigen::Map<const Eigen::VectorXd> f(values.data(), static_cast<Eigen::Index>(values.size()));
  return model.components.transpose() * (f - model.mean);
}

ScoreMatrix project(const FpcaModel &model, const CurveSet &set) {
  ScoreMatrix out;
  out.scores.resize(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(model.p()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.scores.row(static_cast<Eigen::Index>(i)) =
        project(model, set.grid(), set[i].values).transpose();
  }
  out.dates = set.dates();
  return out;
}

Eigen::VectorXd reconstruct(const FpcaModel &model, std::span<const double> scores,
                            std::size_t truncation) {
  if (truncation > model.p()) {
    throw Error(ErrorCode::TruncationTooLarge, "truncation " + std::to_string(truncation) +
                                                   " exceeds the " + std::to_string(model.p()) +
                                                   " fitted components");
  }
  if (scores.size() < truncation) {
    throw Error(ErrorCode::InvalidArgument, "fewer scores than the truncation level");
  }
  Eigen::VectorXd curve = model.mean;
  for (std::size_t k = 0; k < truncation; ++k) {
    curve += scores[k] * model.components.col(static_cast<Eigen::Index>(k));
  }
  return curve;
}

double explained_variability(const FpcaModel &model, std::size_t p) {
  if (p > model.p()) {
    throw Error(ErrorCode::TruncationTooLarge, "requested " + std::to_string(p) +
                                                   " components, model has " +
                                                   std::to_string(model.p()));
  }
  if (!(model.total_variance > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance, "all eigenvalues are zero");
  }
  double cumulative = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    cumulative += model.eigenvalues[static_cast<Eigen::Index>(k)];
  }
  return std::min(cumulative / model.total_variance, 1.0);
}

} // namespace fpcaload
