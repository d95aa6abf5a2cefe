#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fpcaload/calendar.hpp"
#include "fpcaload/fpca.hpp"

namespace fpcaload {

enum class EventKind : std::size_t { FashionWeek = 0, Expo = 1, DesignFestival = 2 };
inline constexpr std::size_t kEventCount = 3;

/// Calendar covariates of one day. `calendar_time` counts days from the
/// first training observation; `covariates` carries optional extra numeric
/// predictors (e.g. a forecast temperature) addressable by covariate terms.
struct DayDescriptor {
  Date date;
  int calendar_time = 0;
  unsigned month = 1;
  unsigned day_of_month = 1;
  unsigned day_of_week = 1; // 1 = Monday
  std::array<bool, kEventCount> events{};
  std::map<std::string, double> covariates;

  bool event(EventKind kind) const { return events[static_cast<std::size_t>(kind)]; }
};

/// A predictor block that enters or leaves a model as a whole.
struct Term {
  std::string name;
  std::vector<std::string> columns;
  std::function<void(const DayDescriptor &, std::span<double>)> encode;
  /// Terms that must be present for this one to be eligible (hierarchy).
  std::vector<std::string> parents;

  std::size_t width() const noexcept { return columns.size(); }
};

namespace terms {
inline constexpr const char *kCalendarTime = "calendar_time";
inline constexpr const char *kMonth = "month";
inline constexpr const char *kDayOfMonth = "day_of_month";
inline constexpr const char *kDayOfWeek = "day_of_week";
inline constexpr const char *kFashionWeek = "fashion_week";
inline constexpr const char *kExpo = "expo";
inline constexpr const char *kDesignFestival = "design_festival";
inline constexpr const char *kDayOfMonthByMonth = "day_of_month:month";
/// Prefix for numeric covariate terms, e.g. "covariate:temp_c".
inline constexpr const char *kCovariatePrefix = "covariate:";
} // namespace terms

/// Builds a registered term by name. Throws Error{InvalidArgument} for
/// unknown names.
Term make_term(const std::string &name);

/// Ordered pool of candidate terms. The intercept is implicit and always
/// the first column.
class DesignSpec {
public:
  DesignSpec() = default;
  explicit DesignSpec(std::vector<Term> terms);

  /// calendar_time, month, day_of_month, day_of_week, the three events and
  /// the day_of_month x month interaction, in column order.
  static DesignSpec standard();
  static DesignSpec from_names(const std::vector<std::string> &names);

  /// Appends a term; its parents must already be registered.
  void add_term(Term term);

  /// Terms named in `names`, kept in pool order.
  DesignSpec subset(const std::vector<std::string> &names) const;

  const std::vector<Term> &terms() const noexcept { return terms_; }
  std::vector<std::string> term_names() const;
  bool contains(const std::string &name) const;
  const Term &term(const std::string &name) const;

  std::size_t column_count() const;
  std::vector<std::string> column_names() const;
  std::size_t largest_term_width() const;

private:
  std::vector<Term> terms_;
};

/// Design matrix with the intercept column first followed by each term's
/// columns in pool order.
Eigen::MatrixXd encode_design(std::span<const DayDescriptor> days, const DesignSpec &spec);

struct OlsFit {
  Eigen::VectorXd beta;
  double rss = 0.0;
};

/// Least-squares fit. Throws RankDeficientDesign when a pivot of X'X falls
/// below 1e-10 times its largest diagonal entry, InsufficientData if n < q.
OlsFit ols_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y);

/// n * ln(RSS / n) + 2q, with RSS / n floored at 1e-300.
double aic(double rss, std::size_t n, std::size_t q);

struct ScoreRegressionModel {
  std::size_t component = 1; // 1-based
  DesignSpec design;          // selected terms only
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients; // zero for columns constant over training
  std::vector<bool> estimated;  // false for columns dropped as constant
  double rss = 0.0;
  std::size_t n_train = 0;
  std::size_t n_parameters = 0;
  double aic = 0.0;

  std::vector<std::string> term_names() const { return design.term_names(); }
};

/// OLS fit of `y` on the intercept plus the named terms. Columns that are
/// constant over the training days (other than the intercept) are not
/// estimated; their coefficient is fixed at zero and they do not count as
/// parameters.
ScoreRegressionModel fit_terms(std::span<const DayDescriptor> days,
                               std::span<const double> y, const DesignSpec &pool,
                               const std::vector<std::string> &term_names,
                               std::size_t component = 1);

/// Bidirectional greedy AIC search over whole terms, starting from the
/// intercept-only model. Interaction terms may enter only while all their
/// parents are present, and parents may not leave while a child is present.
ScoreRegressionModel stepwise_select(std::span<const DayDescriptor> days,
                                     std::span<const double> y, const DesignSpec &pool,
                                     std::size_t component = 1);

Eigen::VectorXd predict_scores(const ScoreRegressionModel &model,
                               std::span<const DayDescriptor> future);

/// Daily curves built from the first `truncation` predicted scores. The
/// result is in normalized units and carries the model's scale factor.
CurveSet forecast_curves(const FpcaModel &fpca,
                         std::span<const ScoreRegressionModel> score_models,
                         std::span<const DayDescriptor> future, std::size_t truncation);

} // namespace fpcaload
