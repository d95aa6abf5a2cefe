// Acceptance suite for the criteria that do not depend on external data.
// Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fpcaload/cli/commands.hpp"
#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"
#include "fpcaload/fpca.hpp"
#include "fpcaload/metrics.hpp"
#include "fpcaload/pipeline.hpp"
#include "fpcaload/regress.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace fpcaload;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok && pass) {
      detail = what;
    }
    pass = pass && ok;
  }
};

CurveSet set_from_rows(const std::vector<std::vector<double>> &rows) {
  std::vector<DailyCurve> curves;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    curves.push_back({add_days(make_date(2020, 1, 1), static_cast<int>(i)), rows[i], "x"});
  }
  return CurveSet(TimeGrid::uniform(rows.front().size()), curves);
}

// --- 4: FPCA property suite ---------------------------------------------------

Outcome fpca_properties() {
  Outcome o;
  std::mt19937 rng(4);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  double worst_orth = 0, worst_eig = 0, worst_var = 0, worst_theta = 0, worst_rec = 0, worst_oracle = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + static_cast<std::size_t>(t % 7);      // 2..8
    const std::size_t n = 2 + static_cast<std::size_t>(t * 5 % 19);  // 2..20
    std::vector<double> weight(m);
    for (double &x : weight) {
      x = w(rng);
    }
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (auto &r : rows) {
      for (std::size_t j = 0; j < m; ++j) {
        r[j] = weight[j] * z(rng);
      }
    }
    const CurveSet set = set_from_rows(rows);
    const FpcaFit f = fit(set, m);
    const Eigen::MatrixXd &phi = f.model.components;
    const auto mi = static_cast<Eigen::Index>(m);
    worst_orth = std::max(worst_orth, (phi.transpose() * phi - Eigen::MatrixXd::Identity(mi, mi)).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd s = covariance(set);
    const double lambda1 = f.model.eigenvalues[0];
    for (Eigen::Index k = 0; k < mi; ++k) {
      const double l = f.model.eigenvalues[k];
      if (l > 0.0) {
        worst_eig = std::max(worst_eig, (s * phi.col(k) - l * phi.col(k)).norm() / l);
        const Eigen::VectorXd c = f.scores.scores.col(k);
        const double var = (c.array() - c.mean()).square().sum() / static_cast<double>(n - 1);
        worst_var = std::max(worst_var, std::abs(var - l) / l);
      }
    }
    double prev = 0.0;
    for (std::size_t p = 1; p <= m; ++p) {
      const double theta = explained_variability(f.model, p);
      o.require(theta >= prev, "theta not monotone");
      prev = theta;
    }
    worst_theta = std::max(worst_theta, std::abs(prev - 1.0));
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd sc = f.scores.scores.row(static_cast<Eigen::Index>(i));
      const Eigen::VectorXd r = reconstruct(f.model, std::vector<double>(sc.data(), sc.data() + sc.size()), m);
      for (std::size_t j = 0; j < m; ++j) {
        worst_rec = std::max(worst_rec, std::abs(r[static_cast<Eigen::Index>(j)] - rows[i][j]));
      }
    }
    if (m <= 4) {
      const auto ref = oracle::jacobi(oracle::covariance(rows));
      for (std::size_t k = 0; k < m; ++k) {
        const double l = f.model.eigenvalues[static_cast<Eigen::Index>(k)];
        const double r = ref.values[k] < 1e-12 * lambda1 ? 0.0 : ref.values[k];
        worst_oracle = std::max(worst_oracle, std::abs(l - r));
        if (l > 1e-8 * lambda1) {
          for (std::size_t j = 0; j < m; ++j) {
            worst_oracle = std::max(worst_oracle, std::abs(phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) - ref.vectors[k][j]));
          }
        }
      }
    }
  }
  o.require(worst_orth <= 1e-8, "orthonormality");
  o.require(worst_eig <= 1e-6, "eigen-consistency");
  o.require(worst_var <= 1e-6, "score variance");
  o.require(worst_theta <= 1e-10, "theta(full)");
  o.require(worst_rec <= 1e-8, "reconstruction");
  o.require(worst_oracle <= 1e-8, "Jacobi oracle");
  char buf[256];
  std::snprintf(buf, sizeof buf, "orth %.1e, eig %.1e, var %.1e, theta %.1e, rec %.1e, oracle %.1e",
                worst_orth, worst_eig, worst_var, worst_theta, worst_rec, worst_oracle);
  o.detail = o.pass ? buf : o.detail + " (" + buf + ")";
  return o;
}

// --- 5: regression oracle suite ---------------------------------------------

std::vector<DayDescriptor> day_run(int count) {
  std::vector<Date> dates;
  for (int i = 0; i < count; ++i) {
    dates.push_back(add_days(make_date(2015, 1, 1), i));
  }
  const std::vector<EventRange> events{
      {EventKind::FashionWeek, {make_date(2015, 2, 25), make_date(2015, 3, 3)}},
      {EventKind::FashionWeek, {make_date(2015, 9, 23), make_date(2015, 9, 29)}},
      {EventKind::Expo, {make_date(2015, 5, 1), make_date(2015, 10, 31)}},
      {EventKind::DesignFestival, {make_date(2015, 4, 14), make_date(2015, 4, 19)}}};
  return build_day_descriptors(dates, events, dates.front());
}

oracle::Matrix to_rows(const Eigen::MatrixXd &x) {
  oracle::Matrix out(static_cast<std::size_t>(x.rows()), std::vector<double>(static_cast<std::size_t>(x.cols())));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x(i, j);
    }
  }
  return out;
}

double exhaustive_min_aic(const std::vector<DayDescriptor> &days, const std::vector<double> &y, const DesignSpec &pool) {
  double best = 1e300;
  const auto &ts = pool.terms();
  double ymax = 0.0;
  for (double v : y) {
    ymax = std::max(ymax, std::abs(v));
  }
  const double fl = 64.0 * std::numeric_limits<double>::epsilon() * ymax;
  for (unsigned mask = 0; mask < (1u << ts.size()); ++mask) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (mask & (1u << i)) {
        names.push_back(ts[i].name);
      }
    }
    bool valid = true;
    for (const auto &nm : names) {
      for (const auto &parent : pool.term(nm).parents) {
        valid = valid && std::count(names.begin(), names.end(), parent) > 0;
      }
    }
    if (!valid) {
      continue;
    }
    const Eigen::MatrixXd full = encode_design(days, pool.subset(names));
    std::vector<Eigen::Index> keep{0};
    for (Eigen::Index j = 1; j < full.cols(); ++j) {
      if (!(full.col(j).array() == full(0, j)).all()) {
        keep.push_back(j);
      }
    }
    Eigen::MatrixXd x(full.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      x.col(static_cast<Eigen::Index>(c)) = full.col(keep[c]);
    }
    const auto ols = oracle::normal_equations(to_rows(x), y);
    if (ols) {
      const double rss = std::max(ols->rss, static_cast<double>(y.size()) * fl * fl);
      best = std::min(best, oracle::aic(rss, y.size(), keep.size()));
    }
  }
  return best;
}

Outcome regression_oracles() {
  Outcome o;
  std::mt19937 rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double worst_ols = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int q = 1 + t % 4;
    const int n = q + 1 + t % (10 - q);
    Eigen::MatrixXd x(n, q);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      for (int j = 1; j < q; ++j) {
        x(i, j) = z(rng);
      }
      y[i] = z(rng);
    }
    const OlsFit f = ols_fit(x, y);
    const auto ref = oracle::normal_equations(to_rows(x), std::vector<double>(y.data(), y.data() + n));
    if (!ref) {
      o.require(false, "oracle singular");
      continue;
    }
    for (int j = 0; j < q; ++j) {
      worst_ols = std::max(worst_ols, std::abs(f.beta[j] - ref->beta[static_cast<std::size_t>(j)]));
    }
  }
  o.require(worst_ols <= 1e-8, "OLS vs normal equations");

  const auto days = day_run(420);
  const std::vector<DesignSpec> pools = {
      DesignSpec::from_names({terms::kCalendarTime, terms::kDayOfWeek, terms::kFashionWeek, terms::kExpo}),
      DesignSpec::from_names({terms::kMonth, terms::kDayOfMonth, terms::kDayOfMonthByMonth, terms::kDayOfWeek}),
      DesignSpec::from_names({terms::kCalendarTime, terms::kMonth, terms::kExpo, terms::kDesignFestival}),
      DesignSpec::from_names({terms::kDayOfWeek, terms::kDesignFestival}),
  };
  int matched = 0;
  double worst_gap = 0.0;
  for (int s = 0; s < 50; ++s) {
    const DesignSpec &pool = pools[static_cast<std::size_t>(s) % pools.size()];
    const Eigen::MatrixXd x = encode_design(days, pool);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      if (u(rng) < 0.3) {
        beta[j] = 0.05 * z(rng) / std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
      }
    }
    const Eigen::VectorXd mu = x * beta;
    std::vector<double> y;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      y.push_back(mu[i] + 0.1 * z(rng));
    }
    const double gap = stepwise_select(days, y, pool).aic - exhaustive_min_aic(days, y, pool);
    worst_gap = std::max(worst_gap, std::abs(gap));
    matched += std::abs(gap) <= 1e-8 ? 1 : 0;
  }
  o.require(matched == 50, "stepwise missed the exhaustive minimum on " + std::to_string(50 - matched) + " series");

  const auto planted_days = day_run(400);
  std::normal_distribution<double> tiny(0.0, 1e-6);
  const double effect[8] = {0, 0.0, 0.1, 0.15, 0.12, 0.2, -0.6, -0.8};
  std::vector<double> y;
  for (const auto &d : planted_days) {
    y.push_back(effect[d.day_of_week] + tiny(rng));
  }
  const auto names = stepwise_select(planted_days, y, DesignSpec::standard()).term_names();
  o.require(std::count(names.begin(), names.end(), terms::kDayOfWeek) == 1, "weekday block not recovered");
  o.require(std::count(names.begin(), names.end(), terms::kMonth) == 0, "month block selected on weekday signal");

  char buf[200];
  std::snprintf(buf, sizeof buf, "OLS max diff %.1e; stepwise=exhaustive on %d/50 (max gap %.1e); weekday block recovered",
                worst_ols, matched, worst_gap);
  if (o.pass) {
    o.detail = buf;
  }
  return o;
}

// --- 6: metric fixtures -------------------------------------------------------

Outcome metric_fixtures() {
  Outcome o;
  using V = std::vector<double>;
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  o.require(near(mape(V{100, 100}, V{90, 110}), 10.0), "MAPE (100,100)/(90,110)");
  o.require(near(mape(V{50}, V{75}), 50.0), "MAPE (50)/(75)");
  o.require(near(energy_percent_error(V{100, 100}, V{80, 100}), 5.0), "energy error m=2 fixture");
  o.require(near(mae(V{1, 3}, V{2, 5}), 1.5), "MAE");
  o.require(near(rep(V{3, 4}, V{0, 0}), 100.0), "REP");
  o.require(near(nmse(V{1, 4, 2, 7}, V(4, 3.5)), 1.0), "NMSE at the mean");
  o.require(near(ppmcc(V{1, 2, 4, 8}, V{7, 9, 13, 21}), 1.0), "PPMCC affine");
  o.require(near(ppmcc(V{1, 2, 4, 8}, V{-1, -2, -4, -8}), -1.0), "PPMCC negated");
  const V x{3, 5, 9};
  o.require(mape(x, x) == 0 && energy_percent_error(x, x) == 0 && mae(x, x) == 0 && nmse(x, x) == 0 && rep(x, x) == 0,
            "perfect forecast");
  if (o.pass) {
    o.detail = "MAPE 10.0 / 50.0, energy error 5.0 (with 1/m), MAE 1.5, REP 100, NMSE 1, PPMCC +/-1";
  }
  return o;
}

// --- 7: pipeline fixtures and synthetic end-to-end --------------------------

CurveSet flat_days(int days, const std::function<std::vector<double>(int)> &value) {
  std::vector<DailyCurve> curves;
  for (int i = 0; i < days; ++i) {
    curves.push_back({add_days(make_date(2014, 1, 1), i), value(i), "e"});
  }
  return CurveSet(TimeGrid::uniform(4), curves);
}

std::map<Date, std::size_t> full_counts(const CurveSet &s) {
  std::map<Date, std::size_t> out;
  for (const auto &d : s.dates()) {
    out[d] = s.grid().size();
  }
  return out;
}

Outcome pipeline_fixtures() {
  Outcome o;
  using V = std::vector<double>;
  o.require(stability_check(V{100, 109}), "stability (100,109)");
  o.require(!stability_check(V{100, 112}), "stability (100,112)");
  o.require(stability_check(V{7, 7, 7}), "stability constant");

  const FilterOptions loose{0.2, 0.1, 0};
  for (std::size_t incomplete : {2u, 3u}) {
    const CurveSet s = flat_days(10, [](int) { return V{1, 2, 3, 4}; });
    auto counts = full_counts(s);
    std::vector<DailyCurve> rest;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i < incomplete) {
        counts[s[i].date] = 2;
      } else {
        rest.push_back(s[i]);
      }
    }
    const bool removed = filter_days(CurveSet(s.grid(), rest), counts, CorruptionRule::AnyZeroSample, loose).entity_removed;
    o.require(removed == (incomplete == 3), "20% incomplete boundary");
  }
  for (int corrupted : {1, 2}) {
    const CurveSet s = flat_days(10, [&](int i) { return i < corrupted ? V{1, 0, 1, 1} : V{1, 2, 3, 4}; });
    o.require(filter_days(s, full_counts(s), CorruptionRule::AnyZeroSample, loose).entity_removed == (corrupted == 2),
              "10% corrupted boundary");
  }
  for (int days : {1094, 1095}) {
    const CurveSet s = flat_days(days, [](int) { return V{1, 2, 3, 4}; });
    o.require(filter_days(s, full_counts(s), CorruptionRule::AnyZeroSample).entity_removed == (days == 1094),
              "1095-day boundary");
  }
  const PopulationRules rules = PopulationRules::defaults();
  const DailyCurve res_day{make_date(2014, 1, 1), {5, 0, 4, 6}, "e"};
  const DailyCurve plt_day{make_date(2014, 1, 1), {3, 0, 0, 3}, "e"};
  o.require(is_corrupted(res_day, rules.find("RES")->corruption), "RES mid-day zero corrupts");
  o.require(!is_corrupted(plt_day, rules.find("PLT")->corruption), "PLT daytime zeros kept");

  const Date spring = make_date(2016, 3, 27);
  std::vector<MeasurementRecord> recs;
  for (int minute = 0; minute < 1440; minute += 15) {
    if (!is_nonexistent_local_time(spring, minute)) {
      recs.push_back({"e", {spring, minute, 0, std::nullopt}, 1.0});
    }
  }
  const auto r = resample_to_grid(recs, TimeGrid::hourly()).at("e");
  o.require(r.slot_counts.at(spring) == 23 && r.complete.empty(), "DST spring-forward day has 23 slots");
  if (o.pass) {
    o.detail = "stability, 20%/10%/1095-day boundaries, RES vs PLT, DST 23 slots";
  }
  return o;
}

struct EndToEnd {
  Outcome outcome;
  std::map<std::string, double> yearly_mape;
};

int cli(const std::vector<std::string> &args, std::string &log) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  log += err.str();
  return code;
}

EndToEnd synthetic_end_to_end() {
  EndToEnd e;
  testing_support::TempDir dir("fpcaload-acceptance");
  const auto subs = synthetic::default_substations();
  synthetic::write_measurements(dir / "measurements.csv", subs, make_date(2014, 1, 1), make_date(2017, 10, 31), 2024);
  synthetic::write_contracts(dir / "contracts.csv", subs, 2014, 2017);
  dir.write("run.cfg",
            "measurements = measurements.csv\ncontracts = contracts.csv\ngrid = hourly\n"
            "train_range = 2014-01-01:2015-12-31\ntest_range = 2016-01-01:2016-12-31\n"
            "components = 4\nskip_missing_actual = true\n");
  const std::string cfg = (dir / "run.cfg").string();
  std::string log;
  std::vector<std::string> forecasts;
  for (const char *run : {"run1", "run2"}) {
    const std::string out = (dir / run).string();
    for (const char *cmd : {"ingest", "fit", "predict", "evaluate"}) {
      const int code = cli({cmd, "--config", cfg, "--output", out}, log);
      if (code != 0) {
        e.outcome.require(false, std::string(cmd) + " exited " + std::to_string(code) + ": " + log);
        return e;
      }
    }
    forecasts.push_back(testing_support::slurp(dir / run / "forecast.csv"));
  }
  e.outcome.require(!forecasts[0].empty() && forecasts[0] == forecasts[1], "forecast not byte-identical across runs");
  for (const char *f : {"curves.csv", "drop_report.csv", "evaluation_daily.csv"}) {
    e.outcome.require(testing_support::slurp(dir / "run1" / f) == testing_support::slurp(dir / "run2" / f),
                      std::string(f) + " not byte-identical");
  }

  std::ifstream yearly(dir / "run1/evaluation_yearly.csv");
  std::string line;
  std::getline(yearly, line);
  while (std::getline(yearly, line)) {
    const auto f = csv::split(line);
    if (f.size() == 5 && f[1] == "2016" && !f[4].empty()) {
      e.yearly_mape[f[0]] = std::stod(f[4]);
    }
  }
  e.outcome.require(e.yearly_mape.size() == subs.size(), "expected a 2016 MAPE for every substation");
  std::string detail = "2016 MAPE:";
  for (const auto &[entity, value] : e.yearly_mape) {
    e.outcome.require(value < 15.0, entity + " yearly MAPE " + std::to_string(value) + " >= 15");
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s %.2f%%", entity.c_str(), value);
    detail += buf;
  }
  if (e.outcome.pass) {
    e.outcome.detail = detail + "; repeated runs byte-identical";
  }
  return e;
}

bool report(const std::string &label, const std::function<Outcome()> &check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception &ex) {
    o.pass = false;
    o.detail = std::string("exception: ") + ex.what();
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << label << " -- " << o.detail << std::endl;
  return o.pass;
}

} // namespace

int main() {
  bool ok = true;
  ok &= report("criterion 4: FPCA property suite (200 random instances)", fpca_properties);
  ok &= report("criterion 5: regression oracle suite", regression_oracles);
  ok &= report("criterion 6: metric fixtures", metric_fixtures);
  ok &= report("criterion 7a: pipeline fixtures", pipeline_fixtures);
  ok &= report("criterion 7b: synthetic ingest -> fit -> predict -> evaluate",
               [] { return synthetic_end_to_end().outcome; });
  return ok ? 0 : 1;
}
