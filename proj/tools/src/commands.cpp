#include "fpcaload/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "fpcaload/cli/curve_io.hpp"
#include "fpcaload/cli/model_io.hpp"
#include "fpcaload/cli/report.hpp"
#include "fpcaload/csv.hpp"
#include "fpcaload/fpca.hpp"
#include "fpcaload/io.hpp"
#include "fpcaload/metrics.hpp"
#include "fpcaload/pipeline.hpp"
#include "fpcaload/regress.hpp"

namespace fpcaload::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return csv::format_number(v); }

std::string opt_num(const std::optional<double> &v) { return v ? num(*v) : std::string(); }

class CsvOut {
public:
  CsvOut(const fs::path &path, const std::vector<std::string> &header) : path_(path) {
    if (path.has_parent_path()) {
      fs::create_directories(path.parent_path());
    }
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) {
      throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    row(header);
  }

  void row(const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out_ << (i ? "," : "") << fields[i];
    }
    out_ << '\n';
  }

  ~CsvOut() = default;

private:
  fs::path path_;
  std::ofstream out_;
};

std::vector<EventRange> load_events(const RunConfig &c) {
  return c.events.empty() ? std::vector<EventRange>{} : io::read_events(c.events);
}

std::vector<Date> days_in(const DateRange &range) {
  std::vector<Date> out;
  for (int d = day_number(range.first); d <= day_number(range.last); ++d) {
    out.push_back(from_day_number(d));
  }
  return out;
}

std::vector<fs::path> model_paths(const RunConfig &c) {
  if (!c.models.empty()) {
    return c.models;
  }
  std::vector<fs::path> found;
  if (fs::is_directory(c.output)) {
    for (const auto &entry : fs::directory_iterator(c.output)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("model_", 0) == 0 &&
          entry.path().extension() == ".txt") {
        found.push_back(entry.path());
      }
    }
  }
  std::sort(found.begin(), found.end());
  if (found.empty()) {
    throw ConfigError("no model files given and none found in " + c.output.string());
  }
  return found;
}

std::string model_stem(const fs::path &model_path) {
  std::string stem = model_path.stem().string();
  return stem.rfind("model_", 0) == 0 ? stem.substr(6) : stem;
}

template <class Fn> std::optional<double> guarded(Fn fn, std::ostream &log, const std::string &what) {
  try {
    return fn();
  } catch (const Error &e) {
    log << "warning: " << what << " undefined (" << e.what() << ")\n";
    return std::nullopt;
  }
}

void write_descriptors(const fs::path &path, const std::vector<DayDescriptor> &days) {
  CsvOut out(path, {"date", "calendar_time", "month", "day_of_month", "day_of_week",
                    "fashion_week", "expo", "design_festival"});
  for (const auto &d : days) {
    out.row({format_date(d.date), std::to_string(d.calendar_time), std::to_string(d.month),
             std::to_string(d.day_of_month), std::to_string(d.day_of_week),
             std::to_string(int(d.event(EventKind::FashionWeek))),
             std::to_string(int(d.event(EventKind::Expo))),
             std::to_string(int(d.event(EventKind::DesignFestival)))});
  }
}

io::EuniteGrid eunite_grid(const std::string &name) {
  if (name == "half-hourly" || name == "48") {
    return io::EuniteGrid::HalfHourly48;
  }
  if (name == "two-hourly" || name == "12") {
    return io::EuniteGrid::TwoHourly12;
  }
  throw ConfigError("EUNITE input supports only half-hourly or two-hourly grids");
}

} // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EmptySet:
  case ErrorCode::ZeroScale:
  case ErrorCode::InsufficientData:
  case ErrorCode::TruncationTooLarge:
  case ErrorCode::DegenerateVariance:
  case ErrorCode::RankDeficientDesign:
  case ErrorCode::DivisionByZeroActual:
  case ErrorCode::ZeroTotalEnergy:
  case ErrorCode::ZeroVarianceActual:
  case ErrorCode::ZeroActualNorm:
  case ErrorCode::ZeroVariance:
  case ErrorCode::ZeroAverage:
    return kExitNumerical;
  default:
    return kExitData;
  }
}

// --- ingest -----------------------------------------------------------------

void cmd_ingest(const RunConfig &c, std::ostream &log) {
  fs::create_directories(c.output);
  std::map<std::string, CurveSet> kept;
  std::vector<DropEntry> report;
  std::vector<std::vector<std::string>> population_rows;

  if (!c.eunite_load.empty()) {
    CurveSet set = io::read_eunite_load(c.eunite_load, eunite_grid(c.grid),
                                        c.entity.value_or("eunite"));
    if (set.empty()) {
      log << "warning: " << c.eunite_load.string() << " holds no load rows\n";
    } else {
      kept.emplace(set.entity_id(), std::move(set));
    }
  } else {
    if (c.measurements.empty()) {
      throw ConfigError("ingest needs 'measurements' or 'eunite_load'");
    }
    const TimeGrid grid = grid_from_name(c.grid);
    const auto records = io::read_measurements(c.measurements);
    if (records.empty()) {
      log << "warning: " << c.measurements.string() << " holds no measurements\n";
    }
    const PopulationRules rules = c.population_rules.empty()
                                      ? PopulationRules::defaults()
                                      : io::read_population_rules(c.population_rules);
    std::map<std::string, std::vector<ContractSnapshot>> contracts;
    if (!c.contracts.empty()) {
      for (auto &s : io::read_contracts(c.contracts)) {
        contracts[s.entity_id].push_back(std::move(s));
      }
    }

    for (auto &[entity, res] : resample_to_grid(records, grid)) {
      report.insert(report.end(), res.dropped.begin(), res.dropped.end());
      CorruptionRule rule = CorruptionRule::AnyZeroSample;
      if (!c.contracts.empty()) {
        const auto it = contracts.find(entity);
        if (it == contracts.end()) {
          report.push_back({entity, std::nullopt, DropReason::Unclassified, 1, "no contract data"});
          continue;
        }
        const bool stable = entity_stable(it->second);
        const ContractSnapshot agg = aggregate_contracts(it->second);
        std::string population = stable ? classify_population(agg, rules) : "";
        population_rows.push_back(
            {entity, stable ? population : "", stable ? "1" : "0", num(agg.contract_kw),
             num(agg.frac_residential), num(agg.frac_public_lighting), num(agg.generation_kw),
             num(agg.frac_pv)});
        if (!stable) {
          report.push_back({entity, std::nullopt, DropReason::UnstableContract, 1, ""});
          continue;
        }
        const PopulationRule *matched = rules.find(population);
        if (matched == nullptr) {
          report.push_back({entity, std::nullopt, DropReason::Unclassified, 1, ""});
          continue;
        }
        rule = matched->corruption;
      }
      FilterResult filtered = filter_days(res.complete, res.slot_counts, rule, c.filter);
      report.insert(report.end(), filtered.report.begin(), filtered.report.end());
      if (!filtered.entity_removed && !filtered.kept.empty()) {
        kept.emplace(entity, std::move(filtered.kept));
      }
    }

    if (!c.regions.empty()) {
      for (auto &[region, set] : aggregate_spatial(kept, io::read_region_map(c.regions))) {
        if (kept.count(region) != 0) {
          throw Error(ErrorCode::InvalidArgument,
                      "region '" + region + "' collides with an entity id");
        }
        if (!set.empty()) {
          kept.emplace(region, std::move(set));
        }
      }
    }
  }

  write_curves_csv(c.output / "curves.csv", kept);

  std::set<int> day_set;
  for (const auto &[entity, set] : kept) {
    for (const auto &d : set.dates()) {
      day_set.insert(day_number(d));
    }
  }
  std::vector<Date> dates;
  for (int d : day_set) {
    dates.push_back(from_day_number(d));
  }
  const auto events = load_events(c);
  write_descriptors(c.output / "descriptors.csv",
                    dates.empty() ? std::vector<DayDescriptor>{}
                                  : build_day_descriptors(dates, events, dates.front()));

  {
    CsvOut out(c.output / "weather_daily.csv", {"date", "temp_c", "rh_pct"});
    if (!c.weather.empty()) {
      const auto readings = io::read_weather(c.weather);
      const WeatherAverage avg = average_weather(readings);
      if (!avg.gaps.empty()) {
        log << "warning: " << avg.gaps.size() << " weather timestamps carry no variable\n";
      }
      for (const auto &[date, w] : daily_weather(avg.city)) {
        out.row({format_date(date), opt_num(w.temperature_c), opt_num(w.relative_humidity)});
      }
    }
  }
  {
    CsvOut out(c.output / "populations.csv", {"entity_id", "population", "stable", "contract_kw",
                                             "frac_res", "frac_plt", "gen_kw", "frac_pv"});
    for (const auto &r : population_rows) {
      out.row(r);
    }
  }
  sort_drop_report(report);
  {
    CsvOut out(c.output / "drop_report.csv", {"entity_id", "date", "reason", "count", "detail"});
    for (const auto &d : report) {
      out.row({d.entity_id, d.date ? format_date(*d.date) : "", to_string(d.reason),
               std::to_string(d.count), d.detail});
    }
  }
  log << "ingest: " << kept.size() << " entities kept, " << report.size()
      << " drop-report entries\n";
}

// --- fit --------------------------------------------------------------------

void cmd_fit(const RunConfig &c, std::ostream &log) {
  const auto all = read_curves_csv(c.curves_path());
  if (c.entity && all.count(*c.entity) == 0) {
    throw Error(ErrorCode::NoData, "entity '" + *c.entity + "' not found in " +
                                       c.curves_path().string());
  }
  if (all.empty()) {
    throw Error(ErrorCode::NoData, "no curves in " + c.curves_path().string());
  }
  const auto events = load_events(c);
  const DesignSpec pool = DesignSpec::standard();
  fs::create_directories(c.output);

  for (const auto &[entity, set] : all) {
    if (c.entity && entity != *c.entity) {
      continue;
    }
    const CurveSet train = c.train_range ? set.restricted_to(*c.train_range) : set;
    if (train.empty()) {
      throw Error(ErrorCode::InsufficientData, "no training days for '" + entity + "'");
    }
    const std::size_t m = train.grid().size();
    const std::size_t p = c.fit_components.value_or(m);
    if (p > m) {
      throw ConfigError("fit_components " + std::to_string(p) + " exceeds the grid size " +
                        std::to_string(m));
    }
    const std::size_t k_max = c.components.value_or(std::min<std::size_t>(4, p));
    if (k_max > p) {
      throw ConfigError("components exceeds fit_components");
    }

    const CurveSet normalized = normalize_by_max(train);
    const FpcaFit fitted = fit(normalized, p);
    const std::vector<Date> dates = normalized.dates();
    const auto days = build_day_descriptors(dates, events, dates.front());

    StoredModel stored{fitted.model, {}, dates.front()};
    for (std::size_t k = 1; k <= k_max; ++k) {
      const Eigen::VectorXd y = fitted.scores.scores.col(static_cast<Eigen::Index>(k - 1));
      stored.score_models.push_back(
          stepwise_select(days, std::span<const double>(y.data(), y.size()), pool, k));
    }

    const std::string stem = file_stem(entity);
    save_model(c.output / ("model_" + stem + ".txt"), stored);

    {
      CsvOut out(c.output / ("theta_" + stem + ".csv"), {"components", "eigenvalue", "theta"});
      const bool degenerate = !(fitted.model.total_variance > 0.0);
      if (degenerate) {
        log << "warning: '" << entity << "' has zero total variance; theta undefined\n";
      }
      for (std::size_t k = 1; k <= p; ++k) {
        out.row({std::to_string(k),
                 num(fitted.model.eigenvalues[static_cast<Eigen::Index>(k - 1)]),
                 degenerate ? "" : num(explained_variability(fitted.model, k))});
      }
    }
    {
      std::vector<std::string> header{"date"};
      for (std::size_t k = 1; k <= p; ++k) {
        header.push_back("score_" + std::to_string(k));
      }
      CsvOut out(c.output / ("scores_" + stem + ".csv"), header);
      for (std::size_t i = 0; i < dates.size(); ++i) {
        std::vector<std::string> row{format_date(dates[i])};
        for (std::size_t k = 0; k < p; ++k) {
          row.push_back(num(fitted.scores.scores(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(k))));
        }
        out.row(row);
      }
    }

    log << "fit " << entity << ": n=" << train.size() << " p=" << p << " K=" << k_max;
    if (fitted.model.total_variance > 0.0 && k_max > 0) {
      log << " theta(K)=" << num(explained_variability(fitted.model, k_max));
    }
    log << '\n';
    for (const auto &sm : stored.score_models) {
      log << "  component " << sm.component << ":";
      for (const auto &t : sm.term_names()) {
        log << ' ' << t;
      }
      log << " (aic " << num(sm.aic) << ")\n";
    }
  }
}

// --- predict ----------------------------------------------------------------

void cmd_predict(const RunConfig &c, std::ostream &log) {
  if (!c.test_range) {
    throw ConfigError("predict needs a test range");
  }
  const auto events = load_events(c);
  const std::vector<Date> dates = days_in(*c.test_range);
  std::map<std::string, CurveSet> forecasts;
  for (const auto &path : model_paths(c)) {
    const StoredModel stored = load_model(path);
    const std::string &entity = stored.fpca.entity_id;
    if (c.entity && entity != *c.entity) {
      continue;
    }
    const std::size_t k = c.components.value_or(stored.score_models.size());
    if (k > stored.score_models.size()) {
      throw ConfigError("components " + std::to_string(k) + " exceeds the " +
                        std::to_string(stored.score_models.size()) +
                        " score models stored in " + path.string());
    }
    const auto days = build_day_descriptors(dates, events, stored.calendar_origin);
    CurveSet fc = forecast_curves(stored.fpca, stored.score_models, days, k);
    if (fc.normalized()) {
      fc = denormalize(fc);
    }
    if (!forecasts.emplace(entity, std::move(fc)).second) {
      throw Error(ErrorCode::InvalidArgument, "two models for entity '" + entity + "'");
    }
    log << "predict " << entity << ": " << dates.size() << " days, K=" << k << '\n';
  }
  write_curves_csv(c.forecast_path(), forecasts);
}

// --- evaluate ---------------------------------------------------------------

void cmd_evaluate(const RunConfig &c, std::ostream &log) {
  const auto forecasts = read_curves_csv(c.forecast_path());
  const auto actuals = read_curves_csv(c.actual_path());
  fs::create_directories(c.output);

  CsvOut daily(c.output / "evaluation_daily.csv",
               {"entity_id", "date", "mape", "energy_pct_error", "mae"});
  CsvOut yearly(c.output / "evaluation_yearly.csv",
                {"entity_id", "year", "days", "mape_days", "mean_mape"});
  CsvOut monthly(c.output / "evaluation_monthly.csv",
                 {"entity_id", "year", "month", "samples", "energy_pct_error", "mean_mape"});
  CsvOut summary(c.output / "evaluation_summary.csv",
                 {"entity_id", "days", "samples", "mape", "mae", "nmse", "rep", "ppmcc",
                  "best_day", "best_day_mape"});

  for (const auto &[entity, raw_fc] : forecasts) {
    if (c.entity && entity != *c.entity) {
      continue;
    }
    const CurveSet fc = c.test_range ? raw_fc.restricted_to(*c.test_range) : raw_fc;
    const auto it = actuals.find(entity);
    if (it == actuals.end()) {
      throw Error(ErrorCode::Misalignment, "no actual curves for entity '" + entity + "'");
    }
    const CurveSet &act = it->second;
    if (!(fc.grid() == act.grid())) {
      throw Error(ErrorCode::GridMismatch, "forecast and actual grids differ for '" + entity + "'");
    }
    std::map<int, std::size_t> actual_index;
    for (std::size_t i = 0; i < act.size(); ++i) {
      actual_index[day_number(act[i].date)] = i;
    }
    std::vector<std::string> missing;
    for (const auto &curve : fc.curves()) {
      if (actual_index.count(day_number(curve.date)) == 0) {
        missing.push_back(format_date(curve.date));
      }
    }
    if (!missing.empty()) {
      std::string listing;
      for (std::size_t i = 0; i < missing.size(); ++i) {
        listing += (i ? ", " : "") + missing[i];
      }
      const std::string message = "actual curves for '" + entity + "' lack " +
                                  std::to_string(missing.size()) +
                                  " forecast date(s): " + listing;
      if (!c.skip_missing_actual) {
        throw Error(ErrorCode::Misalignment, message);
      }
      log << "warning: " << message << " (skipped)\n";
    }

    std::vector<double> all_actual;
    std::vector<double> all_pred;
    struct Bucket {
      std::vector<double> actual, pred;
      double mape_sum = 0.0;
      std::size_t mape_days = 0, days = 0;
    };
    std::map<int, Bucket> by_year;
    std::map<std::pair<int, unsigned>, Bucket> by_month;
    double mape_sum = 0.0;
    std::size_t mape_days = 0;
    std::optional<std::pair<double, Date>> best;

    std::size_t days_scored = 0;
    for (const auto &curve : fc.curves()) {
      const auto found = actual_index.find(day_number(curve.date));
      if (found == actual_index.end()) {
        continue;
      }
      ++days_scored;
      const auto &x = act[found->second].values;
      const auto &y = curve.values;
      std::optional<double> day_mape;
      if (std::none_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
        day_mape = mape(x, y);
      }
      const auto eps = guarded([&] { return energy_percent_error(x, y); }, log,
                               "energy error on " + format_date(curve.date));
      daily.row({entity, format_date(curve.date), opt_num(day_mape), opt_num(eps), num(mae(x, y))});

      const int year = static_cast<int>(curve.date.year());
      const unsigned month = static_cast<unsigned>(curve.date.month());
      for (Bucket *b : {&by_year[year], &by_month[{year, month}]}) {
        b->actual.insert(b->actual.end(), x.begin(), x.end());
        b->pred.insert(b->pred.end(), y.begin(), y.end());
        ++b->days;
        if (day_mape) {
          b->mape_sum += *day_mape;
          ++b->mape_days;
        }
      }
      all_actual.insert(all_actual.end(), x.begin(), x.end());
      all_pred.insert(all_pred.end(), y.begin(), y.end());
      if (day_mape) {
        mape_sum += *day_mape;
        ++mape_days;
        if (!best || *day_mape < best->first) {
          best = {*day_mape, curve.date};
        }
      }
    }

    const auto mean_or_blank = [](double sum, std::size_t n) {
      return n ? num(sum / static_cast<double>(n)) : std::string();
    };
    for (const auto &[year, b] : by_year) {
      yearly.row({entity, std::to_string(year), std::to_string(b.days),
                  std::to_string(b.mape_days), mean_or_blank(b.mape_sum, b.mape_days)});
    }
    for (const auto &[key, b] : by_month) {
      const auto eps = guarded([&] { return energy_percent_error(b.actual, b.pred); }, log,
                               "monthly energy error");
      monthly.row({entity, std::to_string(key.first), std::to_string(key.second),
                   std::to_string(b.actual.size()), opt_num(eps),
                   mean_or_blank(b.mape_sum, b.mape_days)});
    }
    if (mape_days < days_scored) {
      log << "warning: " << entity << ": " << days_scored - mape_days
          << " day(s) with zero actual samples excluded from MAPE\n";
    }
    if (all_actual.empty()) {
      summary.row({entity, "0", "0", "", "", "", "", "", "", ""});
      continue;
    }
    const auto nm = guarded([&] { return nmse(all_actual, all_pred, c.nmse_form); }, log, "NMSE");
    const auto rp = guarded([&] { return rep(all_actual, all_pred); }, log, "REP");
    const auto pc = guarded([&] { return ppmcc(all_actual, all_pred); }, log, "PPMCC");
    summary.row({entity, std::to_string(days_scored), std::to_string(all_actual.size()),
                 mean_or_blank(mape_sum, mape_days), num(mae(all_actual, all_pred)), opt_num(nm),
                 opt_num(rp), opt_num(pc), best ? format_date(best->second) : "",
                 best ? num(best->first) : ""});
    log << "evaluate " << entity << ": " << days_scored << " days, MAPE "
        << mean_or_blank(mape_sum, mape_days) << '\n';
  }
}

// --- scores-report ----------------------------------------------------------

void cmd_scores_report(const RunConfig &c, std::ostream &log) {
  std::map<Date, DailyWeather> weather;
  if (!c.weather.empty()) {
    const auto readings = io::read_weather(c.weather);
    weather = daily_weather(average_weather(readings).city);
  } else {
    log << "warning: no weather input; skipping the temperature x humidity table\n";
  }
  fs::create_directories(c.output);

  for (const auto &path : model_paths(c)) {
    const StoredModel stored = load_model(path);
    if (c.entity && stored.fpca.entity_id != *c.entity) {
      continue;
    }
    const std::string stem = model_stem(path);
    const std::size_t p = stored.fpca.p();
    std::vector<std::string> header{"date"};
    for (std::size_t k = 1; k <= p; ++k) {
      header.push_back("score_" + std::to_string(k));
    }
    const fs::path scores_path = path.parent_path() / ("scores_" + stem + ".csv");
    csv::Reader reader(scores_path, header);
    std::vector<Date> dates;
    std::vector<std::vector<double>> scores(p);
    std::vector<std::string> f;
    while (reader.next(f)) {
      Date d;
      try {
        d = parse_date(f[0]);
      } catch (const Error &e) {
        reader.fail(e.what());
      }
      if (c.train_range && !c.train_range->contains(d)) {
        continue;
      }
      dates.push_back(d);
      for (std::size_t k = 0; k < p; ++k) {
        scores[k].push_back(csv::parse_double(f[k + 1], reader.where()));
      }
    }
    if (dates.empty()) {
      throw Error(ErrorCode::NoData, "no score rows in " + scores_path.string());
    }

    const auto five_table = [&](const std::string &name, const std::string &key_name,
                                auto key_of, unsigned key_count) {
      CsvOut out(c.output / (name + "_" + stem + ".csv"),
                 {"component", key_name, "days", "min", "q1", "median", "q3", "max"});
      for (std::size_t k = 0; k < p; ++k) {
        std::vector<std::vector<double>> groups(key_count + 1);
        for (std::size_t i = 0; i < dates.size(); ++i) {
          groups[key_of(dates[i])].push_back(scores[k][i]);
        }
        for (unsigned g = 1; g <= key_count; ++g) {
          if (groups[g].empty()) {
            continue;
          }
          const FiveNumber s = five_number(groups[g]);
          out.row({std::to_string(k + 1), std::to_string(g), std::to_string(groups[g].size()),
                   num(s.min), num(s.q1), num(s.median), num(s.q3), num(s.max)});
        }
      }
    };
    five_table("scores_by_weekday", "day_of_week", [](const Date &d) { return iso_weekday(d); }, 7);
    five_table("scores_by_month", "month",
               [](const Date &d) { return static_cast<unsigned>(d.month()); }, 12);

    CsvOut out(c.output / ("scores_by_weather_" + stem + ".csv"),
               {"component", "temp_lo", "temp_hi", "rh_lo", "rh_hi", "days", "mean_score"});
    std::vector<double> temp, rh;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < dates.size(); ++i) {
      const auto w = weather.find(dates[i]);
      if (w != weather.end() && w->second.temperature_c && w->second.relative_humidity) {
        temp.push_back(*w->second.temperature_c);
        rh.push_back(*w->second.relative_humidity);
        rows.push_back(i);
      }
    }
    if (rows.empty()) {
      if (!c.weather.empty()) {
        log << "warning: no scored day has both temperature and humidity\n";
      }
    } else {
      for (std::size_t k = 0; k < p; ++k) {
        std::vector<double> y;
        for (std::size_t i : rows) {
          y.push_back(scores[k][i]);
        }
        const WeatherGrid g = weather_grid(temp, rh, y, c.temp_bin, c.rh_bin);
        for (const auto &cell : g.cells) {
          out.row({std::to_string(k + 1), num(g.temp.lower(cell.temp_bin)),
                   num(g.temp.upper(cell.temp_bin)), num(g.rh.lower(cell.rh_bin)),
                   num(g.rh.upper(cell.rh_bin)), std::to_string(cell.count), opt_num(cell.mean)});
        }
      }
    }
    log << "scores-report " << stored.fpca.entity_id << ": " << dates.size() << " days\n";
  }
}

// --- command line -----------------------------------------------------------

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Functional principal component analysis and forecasting of daily load curves",
               "fpcaload"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> model_flags;

  using Command = void (*)(const RunConfig &, std::ostream &);
  std::vector<std::pair<CLI::App *, Command>> commands;
  const auto add = [&](const char *name, const char *help, Command fn) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value configuration file");
    const auto flag = [&](const char *opt, const char *key, const char *desc) {
      sub->add_option_function<std::string>(
          opt, [&overrides, key](const std::string &v) { overrides[key] = v; }, desc);
    };
    flag("--train-range", "train_range", "training dates FIRST:LAST (inclusive)");
    flag("--test-range", "test_range", "test dates FIRST:LAST (inclusive)");
    flag("--components", "components", "number of components forecast (K)");
    flag("--fit-components", "fit_components", "number of components kept in the basis (p)");
    flag("--grid", "grid", "hourly, half-hourly, two-hourly, quarter-hourly or a point count");
    flag("--output", "output", "output directory");
    flag("--curves", "curves", "cleaned curve CSV (fit input)");
    flag("--forecast", "forecast", "forecast CSV");
    flag("--actual", "actual", "actual curve CSV (evaluate input)");
    flag("--entity", "entity", "restrict to one entity id");
    sub->add_flag_function(
        "--skip-missing-actual",
        [&overrides](std::int64_t) { overrides["skip_missing_actual"] = "true"; },
        "evaluate: skip forecast dates without actual curves");
    sub->add_option("--model", model_flags, "model file (repeatable)");
    commands.emplace_back(sub, fn);
  };
  add("ingest", "clean raw measurements into daily curves", cmd_ingest);
  add("fit", "fit the component basis and score regressions", cmd_fit);
  add("predict", "forecast daily curves over the test range", cmd_predict);
  add("evaluate", "compare a forecast with actual curves", cmd_evaluate);
  add("scores-report", "tabulate score distributions", cmd_scores_report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      apply_config_file(config, config_path);
    }
    for (const auto &[key, value] : overrides) {
      apply_setting(config, key, value, {});
    }
    if (!model_flags.empty()) {
      config.models.assign(model_flags.begin(), model_flags.end());
    }
    config.validate();
    for (const auto &[sub, fn] : commands) {
      if (sub->parsed()) {
        fn(config, err);
      }
    }
    return kExitOk;
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

} // namespace fpcaload::cli
