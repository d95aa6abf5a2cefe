#include "fpcaload/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fpcaload/error.hpp"

namespace fpcaload {

const char *to_string(Characteristic c) noexcept {
  switch (c) {
  case Characteristic::ContractKw: return "contract_kw";
  case Characteristic::FracResidential: return "frac_res";
  case Characteristic::FracPublicLighting: return "frac_plt";
  case Characteristic::GenerationKw: return "gen_kw";
  case Characteristic::FracPv: return "frac_pv";
  }
  return "unknown";
}

std::optional<Characteristic> parse_characteristic(std::string_view name) {
  for (auto c : kCharacteristics) {
    if (name == to_string(c)) {
      return c;
    }
  }
  return std::nullopt;
}

double value_of(const ContractSnapshot &s, Characteristic c) {
  switch (c) {
  case Characteristic::ContractKw: return s.contract_kw;
  case Characteristic::FracResidential: return s.frac_residential;
  case Characteristic::FracPublicLighting: return s.frac_public_lighting;
  case Characteristic::GenerationKw: return s.generation_kw;
  case Characteristic::FracPv: return s.frac_pv;
  }
  return 0.0;
}

const char *to_string(CorruptionRule rule) noexcept {
  switch (rule) {
  case CorruptionRule::AnyZeroSample: return "any_zero_sample";
  case CorruptionRule::AllDayZero: return "all_day_zero";
  case CorruptionRule::None: return "none";
  }
  return "unknown";
}

std::optional<CorruptionRule> parse_corruption_rule(std::string_view name) {
  for (auto r : {CorruptionRule::AnyZeroSample, CorruptionRule::AllDayZero, CorruptionRule::None}) {
    if (name == to_string(r)) {
      return r;
    }
  }
  return std::nullopt;
}

bool Threshold::accepts(double x) const {
  switch (op) {
  case Op::Ge: return x >= value;
  case Op::Gt: return x > value;
  case Op::Le: return x <= value;
  case Op::Lt: return x < value;
  }
  return false;
}

bool PopulationRule::matches(const ContractSnapshot &aggregate) const {
  return std::all_of(thresholds.begin(), thresholds.end(), [&](const Threshold &t) {
    return t.accepts(value_of(aggregate, t.characteristic));
  });
}

PopulationRules PopulationRules::defaults() {
  using C = Characteristic;
  using Op = Threshold::Op;
  PopulationRules r;
  r.rules = {
      {"PVG", {{C::FracPv, Op::Ge, 0.95}, {C::GenerationKw, Op::Gt, 0.0}}, CorruptionRule::AnyZeroSample, true},
      {"PLT", {{C::FracPublicLighting, Op::Ge, 0.95}}, CorruptionRule::AllDayZero, true},
      {"RES", {{C::FracResidential, Op::Ge, 0.95}}, CorruptionRule::AnyZeroSample, true},
      {"NRS", {{C::FracResidential, Op::Le, 0.05}, {C::FracPublicLighting, Op::Le, 0.05}},
       CorruptionRule::AnyZeroSample, true},
      {"MIX", {}, CorruptionRule::AnyZeroSample, true},
      {"NIL", {}, CorruptionRule::AnyZeroSample, false},
      {"CTY", {}, CorruptionRule::AnyZeroSample, false},
  };
  return r;
}

const PopulationRule *PopulationRules::find(const std::string &name) const {
  for (const auto &rule : rules) {
    if (rule.name == name) {
      return &rule;
    }
  }
  return nullptr;
}

const char *to_string(DropReason reason) noexcept {
  switch (reason) {
  case DropReason::AmbiguousTimestamp: return "ambiguous_timestamp";
  case DropReason::NonexistentLocalTime: return "nonexistent_local_time";
  case DropReason::OutsideGrid: return "outside_grid";
  case DropReason::IncompleteDay: return "incomplete_day";
  case DropReason::CorruptedDay: return "corrupted_day";
  case DropReason::TooManyIncompleteDays: return "too_many_incomplete_days";
  case DropReason::TooManyCorruptedDays: return "too_many_corrupted_days";
  case DropReason::TooFewDays: return "too_few_days";
  case DropReason::UnstableContract: return "unstable_contract";
  case DropReason::Unclassified: return "unclassified";
  }
  return "unknown";
}

void sort_drop_report(std::vector<DropEntry> &report) {
  std::stable_sort(report.begin(), report.end(), [](const DropEntry &a, const DropEntry &b) {
    const auto key = [](const DropEntry &e) {
      return std::tuple(e.entity_id, e.date.has_value(),
                        e.date ? day_number(*e.date) : std::numeric_limits<int>::min(),
                        static_cast<int>(e.reason));
    };
    return key(a) < key(b);
  });
}

// --- Contract stability -------------------------------------------------------

bool stability_check(std::span<const double> series) {
  if (series.empty()) {
    throw Error(ErrorCode::InvalidArgument, "stability check of an empty series");
  }
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  double sum = 0.0;
  for (double v : series) {
    sum += v;
  }
  const double avg = sum / static_cast<double>(series.size());
  if (avg == 0.0) {
    throw Error(ErrorCode::ZeroAverage, "series averages to zero");
  }
  return *hi - *lo < 0.1 * avg;
}

bool entity_stable(std::span<const ContractSnapshot> snapshots) {
  if (snapshots.empty()) {
    return false;
  }
  std::vector<double> series(snapshots.size());
  for (auto c : kCharacteristics) {
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
      series[i] = value_of(snapshots[i], c);
    }
    if (std::all_of(series.begin(), series.end(), [](double v) { return v == 0.0; })) {
      continue;
    }
    try {
      if (!stability_check(series)) {
        return false;
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::ZeroAverage) {
        throw;
      }
      return false; // values of mixed sign cancelling out
    }
  }
  return true;
}

ContractSnapshot aggregate_contracts(std::span<const ContractSnapshot> snapshots) {
  if (snapshots.empty()) {
    throw Error(ErrorCode::EmptySet, "no contract snapshots");
  }
  ContractSnapshot out;
  out.entity_id = snapshots.front().entity_id;
  out.period = snapshots.front().period;
  const double n = static_cast<double>(snapshots.size());
  for (const auto &s : snapshots) {
    if (day_number(s.period.first) < day_number(out.period.first)) {
      out.period.first = s.period.first;
    }
    if (day_number(s.period.last) > day_number(out.period.last)) {
      out.period.last = s.period.last;
    }
    out.contract_kw += s.contract_kw / n;
    out.frac_residential += s.frac_residential / n;
    out.frac_public_lighting += s.frac_public_lighting / n;
    out.generation_kw += s.generation_kw / n;
    out.frac_pv += s.frac_pv / n;
  }
  return out;
}

std::string classify_population(const ContractSnapshot &aggregate, const PopulationRules &rules) {
  for (const auto &rule : rules.rules) {
    if (rule.classifiable && rule.matches(aggregate)) {
      return rule.name;
    }
  }
  return "Unclassified";
}

// --- Resampling -----------------------------------------------------------------

namespace {

struct SlotAccumulator {
  std::vector<double> sum;
  std::vector<std::size_t> count;
};

void add_drop(std::map<std::tuple<int, int>, DropEntry> &drops, const std::string &entity,
              const Date &date, DropReason reason, std::size_t count) {
  auto [it, inserted] = drops.try_emplace({day_number(date), static_cast<int>(reason)},
                                          DropEntry{entity, date, reason, 0, {}});
  it->second.count += count;
}

ResampleResult resample_entity(const std::string &entity,
                               std::vector<const MeasurementRecord *> records,
                               const TimeGrid &grid) {
  std::stable_sort(records.begin(), records.end(),
                   [](const MeasurementRecord *a, const MeasurementRecord *b) {
                     return a->timestamp < b->timestamp;
                   });
  const std::size_t m = grid.size();
  std::map<int, SlotAccumulator> days;
  std::map<std::tuple<int, int>, DropEntry> drops;

  const auto same_wall_clock = [](const LocalDateTime &a, const LocalDateTime &b) {
    return a.date == b.date && a.minute_of_day == b.minute_of_day && a.second == b.second;
  };

  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i + 1;
    while (j < records.size() && same_wall_clock(records[j]->timestamp, records[i]->timestamp)) {
      ++j;
    }
    const LocalDateTime &t = records[i]->timestamp;
    const std::size_t group = j - i;

    if (is_nonexistent_local_time(t.date, t.minute_of_day)) {
      add_drop(drops, entity, t.date, DropReason::NonexistentLocalTime, group);
      i = j;
      continue;
    }
    if (group > 1) {
      bool resolvable = group == 2 && is_repeated_local_time(t.date, t.minute_of_day);
      if (resolvable) {
        const auto &o1 = records[i]->timestamp.utc_offset_minutes;
        const auto &o2 = records[i + 1]->timestamp.utc_offset_minutes;
        resolvable = o1.has_value() == o2.has_value() && (!o1 || *o1 != *o2);
      }
      if (!resolvable) {
        add_drop(drops, entity, t.date, DropReason::AmbiguousTimestamp, group);
        i = j;
        continue;
      }
    }
    const auto slot = grid.slot_of(t.hour());
    if (!slot) {
      add_drop(drops, entity, t.date, DropReason::OutsideGrid, group);
      i = j;
      continue;
    }
    auto &acc = days[day_number(t.date)];
    if (acc.sum.empty()) {
      acc.sum.assign(m, 0.0);
      acc.count.assign(m, 0);
    }
    for (std::size_t k = i; k < j; ++k) {
      acc.sum[*slot] += records[k]->avg_power_kw;
      ++acc.count[*slot];
    }
    i = j;
  }

  ResampleResult result;
  std::vector<DailyCurve> complete;
  for (const auto &[day, acc] : days) {
    const Date date = from_day_number(day);
    const auto observed = static_cast<std::size_t>(
        std::count_if(acc.count.begin(), acc.count.end(), [](std::size_t c) { return c > 0; }));
    result.slot_counts[date] = observed;
    if (observed == m) {
      DailyCurve curve{date, std::vector<double>(m), entity};
      for (std::size_t s = 0; s < m; ++s) {
        curve.values[s] = acc.sum[s] / static_cast<double>(acc.count[s]);
      }
      complete.push_back(std::move(curve));
    }
  }
  result.complete = CurveSet(grid, std::move(complete));
  for (auto &[key, entry] : drops) {
    result.dropped.push_back(std::move(entry));
  }
  return result;
}

} // namespace

std::map<std::string, ResampleResult>
resample_to_grid(std::span<const MeasurementRecord> records, const TimeGrid &grid) {
  std::map<std::string, std::vector<const MeasurementRecord *>> by_entity;
  for (const auto &r : records) {
    if (!std::isfinite(r.avg_power_kw)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite power for '" + r.entity_id + "'");
    }
    by_entity[r.entity_id].push_back(&r);
  }
  std::map<std::string, ResampleResult> out;
  for (auto &[entity, recs] : by_entity) {
    out.emplace(entity, resample_entity(entity, std::move(recs), grid));
  }
  return out;
}

// --- Day filtering -----------------------------------------------------------------

bool is_corrupted(const DailyCurve &curve, CorruptionRule rule) {
  const auto zero = [](double v) { return v == 0.0; };
  switch (rule) {
  case CorruptionRule::AnyZeroSample: return std::any_of(curve.values.begin(), curve.values.end(), zero);
  case CorruptionRule::AllDayZero: return std::all_of(curve.values.begin(), curve.values.end(), zero);
  case CorruptionRule::None: return false;
  }
  return false;
}

FilterResult filter_days(const CurveSet &set, const std::map<Date, std::size_t> &slot_counts,
                         CorruptionRule rule, const FilterOptions &options) {
  FilterResult result;
  const std::size_t m = set.grid().size();
  const std::string entity = set.entity_id();

  std::optional<int> first;
  std::optional<int> last;
  const auto observe = [&](const Date &d) {
    const int n = day_number(d);
    first = first ? std::min(*first, n) : n;
    last = last ? std::max(*last, n) : n;
  };
  for (const auto &[date, count] : slot_counts) {
    observe(date);
  }
  for (const auto &c : set.curves()) {
    observe(c.date);
  }
  if (!first) {
    result.kept = set;
    return result;
  }
  const double available = static_cast<double>(*last - *first + 1);

  const auto remove_entity = [&](DropReason reason, std::string detail) {
    result.entity_removed = true;
    result.kept = CurveSet(set.grid(), {}, set.scale());
    result.report.push_back({entity, std::nullopt, reason, 1, std::move(detail)});
    sort_drop_report(result.report);
    return result;
  };

  // (i) incomplete days
  std::vector<Date> incomplete;
  for (const auto &[date, count] : slot_counts) {
    if (count < m) {
      incomplete.push_back(date);
    }
  }
  for (const auto &d : incomplete) {
    result.report.push_back({entity, d, DropReason::IncompleteDay, 1,
                             std::to_string(slot_counts.at(d)) + "/" + std::to_string(m) + " slots"});
  }
  if (static_cast<double>(incomplete.size()) > options.max_incomplete_fraction * available) {
    return remove_entity(DropReason::TooManyIncompleteDays,
                         std::to_string(incomplete.size()) + " of " +
                             std::to_string(static_cast<long>(available)) + " days");
  }
  std::vector<DailyCurve> survivors;
  for (const auto &c : set.curves()) {
    const auto it = slot_counts.find(c.date);
    if (it == slot_counts.end() || it->second >= m) {
      survivors.push_back(c);
    }
  }

  // (ii) corrupted days
  std::vector<DailyCurve> clean;
  std::size_t corrupted = 0;
  for (auto &c : survivors) {
    if (is_corrupted(c, rule)) {
      ++corrupted;
      result.report.push_back({entity, c.date, DropReason::CorruptedDay, 1, to_string(rule)});
    } else {
      clean.push_back(std::move(c));
    }
  }
  if (static_cast<double>(corrupted) > options.max_corrupted_fraction * available) {
    return remove_entity(DropReason::TooManyCorruptedDays,
                         std::to_string(corrupted) + " of " +
                             std::to_string(static_cast<long>(available)) + " days");
  }

  // (iii) minimum history
  if (clean.size() < options.min_days) {
    return remove_entity(DropReason::TooFewDays, std::to_string(clean.size()) + " < " +
                                                     std::to_string(options.min_days) + " days");
  }
  result.kept = CurveSet(set.grid(), std::move(clean), set.scale());
  sort_drop_report(result.report);
  return result;
}

// --- Aggregation ------------------------------------------------------------------

std::map<std::string, CurveSet>
aggregate_spatial(const std::map<std::string, CurveSet> &by_entity,
                  const std::map<std::string, std::string> &region_of) {
  std::map<std::string, std::vector<const CurveSet *>> members;
  for (const auto &[entity, set] : by_entity) {
    const auto it = region_of.find(entity);
    if (it != region_of.end()) {
      members[it->second].push_back(&set);
    }
  }
  std::map<std::string, CurveSet> out;
  for (const auto &[region, sets] : members) {
    const TimeGrid &grid = sets.front()->grid();
    std::map<int, std::pair<std::size_t, std::vector<double>>> sums;
    for (const CurveSet *s : sets) {
      if (!(s->grid() == grid)) {
        throw Error(ErrorCode::GridMismatch, "members of region '" + region + "' use different grids");
      }
      if (s->normalized()) {
        throw Error(ErrorCode::InvalidArgument, "cannot aggregate normalized curves");
      }
      for (const auto &c : s->curves()) {
        auto &slot = sums[day_number(c.date)];
        if (slot.second.empty()) {
          slot.second.assign(grid.size(), 0.0);
        }
        ++slot.first;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          slot.second[k] += c.values[k];
        }
      }
    }
    std::vector<DailyCurve> curves;
    for (auto &[day, entry] : sums) {
      if (entry.first == sets.size()) {
        curves.push_back({from_day_number(day), std::move(entry.second), region});
      }
    }
    out.emplace(region, CurveSet(grid, std::move(curves)));
  }
  return out;
}

WeatherAverage average_weather(std::span<const WeatherReading> readings) {
  using Field = std::optional<double> WeatherReading::*;
  static constexpr std::array<Field, 5> fields = {
      &WeatherReading::temperature_c, &WeatherReading::relative_humidity,
      &WeatherReading::radiation, &WeatherReading::rainfall, &WeatherReading::wind_speed};

  struct Acc {
    LocalDateTime when;
    std::array<double, 5> sum{};
    std::array<std::size_t, 5> count{};
  };
  std::vector<Acc> accs;
  std::vector<const WeatherReading *> sorted;
  for (const auto &r : readings) {
    sorted.push_back(&r);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const WeatherReading *a, const WeatherReading *b) {
    return a->timestamp < b->timestamp;
  });
  for (const WeatherReading *r : sorted) {
    if (accs.empty() || !(accs.back().when == r->timestamp)) {
      accs.push_back({r->timestamp, {}, {}});
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (const auto &v = r->*fields[f]) {
        accs.back().sum[f] += *v;
        ++accs.back().count[f];
      }
    }
  }
  WeatherAverage out;
  for (const auto &a : accs) {
    WeatherReading city{"city", a.when, {}, {}, {}, {}, {}};
    bool any = false;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (a.count[f] > 0) {
        city.*fields[f] = a.sum[f] / static_cast<double>(a.count[f]);
        any = true;
      }
    }
    if (any) {
      out.city.push_back(std::move(city));
    } else {
      out.gaps.push_back(a.when);
    }
  }
  return out;
}

std::map<Date, DailyWeather> daily_weather(std::span<const WeatherReading> city) {
  struct Acc {
    double t = 0.0, h = 0.0;
    std::size_t nt = 0, nh = 0;
  };
  std::map<int, Acc> days;
  for (const auto &r : city) {
    auto &a = days[day_number(r.timestamp.date)];
    if (r.temperature_c) {
      a.t += *r.temperature_c;
      ++a.nt;
    }
    if (r.relative_humidity) {
      a.h += *r.relative_humidity;
      ++a.nh;
    }
  }
  std::map<Date, DailyWeather> out;
  for (const auto &[day, a] : days) {
    DailyWeather w;
    if (a.nt > 0) {
      w.temperature_c = a.t / static_cast<double>(a.nt);
    }
    if (a.nh > 0) {
      w.relative_humidity = a.h / static_cast<double>(a.nh);
    }
    out.emplace(from_day_number(day), w);
  }
  return out;
}

std::vector<DayDescriptor> build_day_descriptors(std::span<const Date> dates,
                                                 std::span<const EventRange> events,
                                                 const Date &origin) {
  std::vector<DayDescriptor> out;
  out.reserve(dates.size());
  for (std::size_t i = 0; i < dates.size(); ++i) {
    const Date &d = dates[i];
    const int ct = days_between(origin, d);
    if (ct < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  format_date(d) + " precedes the calendar origin " + format_date(origin));
    }
    if (i > 0 && day_number(d) <= day_number(dates[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "descriptor dates must be strictly increasing");
    }
    DayDescriptor desc;
    desc.date = d;
    desc.calendar_time = ct;
    desc.month = static_cast<unsigned>(d.month());
    desc.day_of_month = static_cast<unsigned>(d.day());
    desc.day_of_week = iso_weekday(d);
    for (const auto &e : events) {
      if (e.range.contains(d)) {
        desc.events[static_cast<std::size_t>(e.kind)] = true;
      }
    }
    out.push_back(std::move(desc));
  }
  return out;
}

} // namespace fpcaload
