#include "fpcaload/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "fpcaload/error.hpp"

namespace fpcaload {

namespace {

constexpr double kPivotTolerance = 1e-10;
// RSS below n * (kNoiseFloor * max|y|)^2 is indistinguishable from zero in
// double precision and is treated as that floor when comparing models.
constexpr double kNoiseFloor = 64.0 * std::numeric_limits<double>::epsilon();

std::string two_digit(const char *prefix, unsigned value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%02u", prefix, value);
  return buf;
}

Term single_column(std::string name, std::function<double(const DayDescriptor &)> value) {
  Term t;
  t.name = name;
  t.columns = {std::move(name)};
  t.encode = [value = std::move(value)](const DayDescriptor &d, std::span<double> out) {
    out[0] = value(d);
  };
  return t;
}

Term event_term(const char *name, EventKind kind) {
  return single_column(name, [kind](const DayDescriptor &d) { return d.event(kind) ? 1.0 : 0.0; });
}

bool contains_name(const std::vector<std::string> &names, const std::string &name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

} // namespace

Term make_term(const std::string &name) {
  using namespace terms;
  if (name == kCalendarTime) {
    return single_column(name, [](const DayDescriptor &d) { return double(d.calendar_time); });
  }
  if (name == kDayOfMonth) {
    return single_column(name, [](const DayDescriptor &d) { return double(d.day_of_month); });
  }
  if (name == kMonth) {
    // January is the reference level.
    Term t;
    t.name = name;
    for (unsigned mo = 2; mo <= 12; ++mo) {
      t.columns.push_back(two_digit("month_", mo));
    }
    t.encode = [](const DayDescriptor &d, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      if (d.month >= 2 && d.month <= 12) {
        out[d.month - 2] = 1.0;
      }
    };
    return t;
  }
  if (name == kDayOfWeek) {
    // Monday is the reference level.
    Term t;
    t.name = name;
    for (unsigned dow = 2; dow <= 7; ++dow) {
      t.columns.push_back("day_of_week_" + std::to_string(dow));
    }
    t.encode = [](const DayDescriptor &d, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      if (d.day_of_week >= 2 && d.day_of_week <= 7) {
        out[d.day_of_week - 2] = 1.0;
      }
    };
    return t;
  }
  if (name == kFashionWeek) {
    return event_term(kFashionWeek, EventKind::FashionWeek);
  }
  if (name == kExpo) {
    return event_term(kExpo, EventKind::Expo);
  }
  if (name == kDesignFestival) {
    return event_term(kDesignFestival, EventKind::DesignFestival);
  }
  if (name == kDayOfMonthByMonth) {
    Term t;
    t.name = name;
    for (unsigned mo = 2; mo <= 12; ++mo) {
      t.columns.push_back(two_digit("day_of_month:month_", mo));
    }
    t.encode = [](const DayDescriptor &d, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      if (d.month >= 2 && d.month <= 12) {
        out[d.month - 2] = double(d.day_of_month);
      }
    };
    t.parents = {kMonth, kDayOfMonth};
    return t;
  }
  const std::string prefix = kCovariatePrefix;
  if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) {
    const std::string key = name.substr(prefix.size());
    return single_column(name, [key](const DayDescriptor &d) {
      const auto it = d.covariates.find(key);
      if (it == d.covariates.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "day " + format_date(d.date) + " lacks covariate '" + key + "'");
      }
      return it->second;
    });
  }
  throw Error(ErrorCode::InvalidArgument, "unknown design term '" + name + "'");
}

DesignSpec::DesignSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (terms_[i].name == terms_[j].name) {
        throw Error(ErrorCode::InvalidArgument, "duplicate design term '" + terms_[i].name + "'");
      }
    }
  }
}

DesignSpec DesignSpec::standard() {
  using namespace terms;
  return from_names({kCalendarTime, kMonth, kDayOfMonth, kDayOfWeek, kFashionWeek, kExpo,
                     kDesignFestival, kDayOfMonthByMonth});
}

DesignSpec DesignSpec::from_names(const std::vector<std::string> &names) {
  std::vector<Term> out;
  out.reserve(names.size());
  for (const auto &n : names) {
    out.push_back(make_term(n));
  }
  return DesignSpec(std::move(out));
}

void DesignSpec::add_term(Term term) {
  if (contains(term.name)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate design term '" + term.name + "'");
  }
  for (const auto &parent : term.parents) {
    if (!contains(parent)) {
      throw Error(ErrorCode::InvalidArgument,
                  "term '" + term.name + "' requires unregistered parent '" + parent + "'");
    }
  }
  terms_.push_back(std::move(term));
}

DesignSpec DesignSpec::subset(const std::vector<std::string> &names) const {
  for (const auto &n : names) {
    if (!contains(n)) {
      throw Error(ErrorCode::InvalidArgument, "term '" + n + "' is not in the pool");
    }
  }
  std::vector<Term> out;
  for (const auto &t : terms_) {
    if (contains_name(names, t.name)) {
      out.push_back(t);
    }
  }
  return DesignSpec(std::move(out));
}

std::vector<std::string> DesignSpec::term_names() const {
  std::vector<std::string> out;
  for (const auto &t : terms_) {
    out.push_back(t.name);
  }
  return out;
}

bool DesignSpec::contains(const std::string &name) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term &t) { return t.name == name; });
}

const Term &DesignSpec::term(const std::string &name) const {
  for (const auto &t : terms_) {
    if (t.name == name) {
      return t;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "term '" + name + "' is not in the pool");
}

std::size_t DesignSpec::column_count() const {
  std::size_t q = 1;
  for (const auto &t : terms_) {
    q += t.width();
  }
  return q;
}

std::vector<std::string> DesignSpec::column_names() const {
  std::vector<std::string> out{"intercept"};
  for (const auto &t : terms_) {
    out.insert(out.end(), t.columns.begin(), t.columns.end());
  }
  return out;
}

std::size_t DesignSpec::largest_term_width() const {
  std::size_t w = 0;
  for (const auto &t : terms_) {
    w = std::max(w, t.width());
  }
  return w;
}

Eigen::MatrixXd encode_design(std::span<const DayDescriptor> days, const DesignSpec &spec) {
  const auto n = static_cast<Eigen::Index>(days.size());
  const auto q = static_cast<Eigen::Index>(spec.column_count());
  // Row-major scratch so each term writes a contiguous span.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x(n, q);
  for (Eigen::Index i = 0; i < n; ++i) {
    double *row = x.data() + i * q;
    row[0] = 1.0;
    std::size_t offset = 1;
    for (const auto &t : spec.terms()) {
      t.encode(days[static_cast<std::size_t>(i)], std::span<double>(row + offset, t.width()));
      offset += t.width();
    }
  }
  return x;
}

OlsFit ols_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
  const auto n = x.rows();
  const auto q = x.cols();
  if (q == 0) {
    throw Error(ErrorCode::InvalidArgument, "design matrix has no columns");
  }
  if (y.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "response length does not match design rows");
  }
  if (n < q) {
    throw Error(ErrorCode::InsufficientData, std::to_string(n) + " observations for " +
                                                 std::to_string(q) + " coefficients");
  }
  const Eigen::MatrixXd gram = x.transpose() * x;
  const double largest = gram.diagonal().maxCoeff();
  if (!(largest > 0.0)) {
    throw Error(ErrorCode::RankDeficientDesign, "design matrix is zero");
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success ||
      ldlt.vectorD().minCoeff() < kPivotTolerance * largest) {
    throw Error(ErrorCode::RankDeficientDesign, "X'X is singular within tolerance");
  }
  OlsFit out;
  out.beta = x.colPivHouseholderQr().solve(y);
  out.rss = (y - x * out.beta).squaredNorm();
  return out;
}

double aic(double rss, std::size_t n, std::size_t q) {
  if (n == 0 || !(rss >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "AIC needs n >= 1 and RSS >= 0");
  }
  const double nd = static_cast<double>(n);
  const double ratio = std::max(rss / nd, 1e-300);
  return nd * std::log(ratio) + 2.0 * static_cast<double>(q);
}

ScoreRegressionModel fit_terms(std::span<const DayDescriptor> days, std::span<const double> y,
                               const DesignSpec &pool, const std::vector<std::string> &term_names,
                               std::size_t component) {
  if (days.size() != y.size()) {
    throw Error(ErrorCode::InvalidArgument, "descriptor and score counts differ");
  }
  if (days.empty()) {
    throw Error(ErrorCode::InsufficientData, "no training days");
  }
  ScoreRegressionModel model;
  model.component = component;
  model.design = pool.subset(term_names);
  model.columns = model.design.column_names();

  const Eigen::MatrixXd x = encode_design(days, model.design);
  const auto q = x.cols();
  model.estimated.assign(static_cast<std::size_t>(q), true);
  std::vector<Eigen::Index> keep{0};
  for (Eigen::Index j = 1; j < q; ++j) {
    const bool constant = (x.col(j).array() == x(0, j)).all();
    model.estimated[static_cast<std::size_t>(j)] = !constant;
    if (!constant) {
      keep.push_back(j);
    }
  }
  Eigen::MatrixXd xs(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    xs.col(static_cast<Eigen::Index>(c)) = x.col(keep[c]);
  }
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const OlsFit ols = ols_fit(xs, yv);

  model.coefficients = Eigen::VectorXd::Zero(q);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    model.coefficients[keep[c]] = ols.beta[static_cast<Eigen::Index>(c)];
  }
  const double nd = static_cast<double>(y.size());
  const double scale = yv.cwiseAbs().maxCoeff();
  const double floor = nd * (kNoiseFloor * scale) * (kNoiseFloor * scale);
  model.rss = std::max(ols.rss, floor);
  model.n_train = y.size();
  model.n_parameters = keep.size();
  model.aic = aic(model.rss, model.n_train, model.n_parameters);
  return model;
}

ScoreRegressionModel stepwise_select(std::span<const DayDescriptor> days,
                                     std::span<const double> y, const DesignSpec &pool,
                                     std::size_t component) {
  if (days.size() < 2 + pool.largest_term_width()) {
    throw Error(ErrorCode::InsufficientData,
                "stepwise selection needs at least " +
                    std::to_string(2 + pool.largest_term_width()) + " days");
  }
  std::vector<std::string> selected;
  ScoreRegressionModel current = fit_terms(days, y, pool, selected, component);

  const std::size_t max_steps = pool.terms().size() * pool.terms().size() + 1;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<ScoreRegressionModel> best;
    std::vector<std::string> best_selection;
    for (const auto &t : pool.terms()) {
      std::vector<std::string> candidate = selected;
      if (contains_name(selected, t.name)) {
        const bool has_child = std::any_of(selected.begin(), selected.end(), [&](const auto &s) {
          return contains_name(pool.term(s).parents, t.name);
        });
        if (has_child) {
          continue;
        }
        std::erase(candidate, t.name);
      } else {
        const bool parents_present = std::all_of(
            t.parents.begin(), t.parents.end(),
            [&](const std::string &parent) { return contains_name(selected, parent); });
        if (!parents_present) {
          continue;
        }
        candidate.push_back(t.name);
      }
      try {
        auto fitted = fit_terms(days, y, pool, candidate, component);
        if (!best || fitted.aic < best->aic) {
          best = std::move(fitted);
          best_selection = std::move(candidate);
        }
      } catch (const Error &e) {
        if (e.code() != ErrorCode::RankDeficientDesign &&
            e.code() != ErrorCode::InsufficientData) {
          throw;
        }
      }
    }
    if (!best || !(best->aic < current.aic)) {
      break;
    }
    current = std::move(*best);
    selected = std::move(best_selection);
  }
  return current;
}

Eigen::VectorXd predict_scores(const ScoreRegressionModel &model,
                               std::span<const DayDescriptor> future) {
  const Eigen::MatrixXd x = encode_design(future, model.design);
  if (x.cols() != model.coefficients.size()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match the design");
  }
  return x * model.coefficients;
}

CurveSet forecast_curves(const FpcaModel &fpca,
                         std::span<const ScoreRegressionModel> score_models,
                         std::span<const DayDescriptor> future, std::size_t truncation) {
  if (truncation > score_models.size() || truncation > fpca.p()) {
    throw Error(ErrorCode::TruncationTooLarge,
                "truncation " + std::to_string(truncation) + " exceeds available components");
  }
  Eigen::MatrixXd scores(static_cast<Eigen::Index>(future.size()),
                         static_cast<Eigen::Index>(truncation));
  for (std::size_t k = 1; k <= truncation; ++k) {
    const auto it = std::find_if(score_models.begin(), score_models.end(),
                                 [k](const ScoreRegressionModel &m) { return m.component == k; });
    if (it == score_models.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "no score model for component " + std::to_string(k));
    }
    scores.col(static_cast<Eigen::Index>(k - 1)) = predict_scores(*it, future);
  }
  std::vector<DailyCurve> curves;
  curves.reserve(future.size());
  std::vector<double> row(truncation);
  for (std::size_t i = 0; i < future.size(); ++i) {
    for (std::size_t k = 0; k < truncation; ++k) {
      row[k] = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
    const Eigen::VectorXd curve = reconstruct(fpca, row, truncation);
    curves.push_back({future[i].date, std::vector<double>(curve.data(), curve.data() + curve.size()),
                      fpca.entity_id});
  }
  return CurveSet(fpca.grid, std::move(curves), fpca.scale);
}

} // namespace fpcaload
