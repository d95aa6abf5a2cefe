#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpcaload/calendar.hpp"
#include "fpcaload/curves.hpp"
#include "fpcaload/regress.hpp"

namespace fpcaload {

struct MeasurementRecord {
  std::string entity_id;
  LocalDateTime timestamp;
  double avg_power_kw = 0.0;
};

struct ContractSnapshot {
  std::string entity_id;
  DateRange period;
  double contract_kw = 0.0;
  double frac_residential = 0.0;
  double frac_public_lighting = 0.0;
  double generation_kw = 0.0;
  double frac_pv = 0.0;
};

/// The five contractual characteristics checked for stability and used by
/// population thresholds.
enum class Characteristic { ContractKw, FracResidential, FracPublicLighting, GenerationKw, FracPv };
inline constexpr std::array<Characteristic, 5> kCharacteristics = {
    Characteristic::ContractKw, Characteristic::FracResidential,
    Characteristic::FracPublicLighting, Characteristic::GenerationKw, Characteristic::FracPv};

const char *to_string(Characteristic c) noexcept;
std::optional<Characteristic> parse_characteristic(std::string_view name);
double value_of(const ContractSnapshot &snapshot, Characteristic c);

enum class CorruptionRule { AnyZeroSample, AllDayZero, None };
const char *to_string(CorruptionRule rule) noexcept;
std::optional<CorruptionRule> parse_corruption_rule(std::string_view name);

/// `characteristic op value`, op one of >=, >, <=, <.
struct Threshold {
  enum class Op { Ge, Gt, Le, Lt };
  Characteristic characteristic = Characteristic::ContractKw;
  Op op = Op::Ge;
  double value = 0.0;

  bool accepts(double x) const;
};

struct PopulationRule {
  std::string name;
  std::vector<Threshold> thresholds;
  CorruptionRule corruption = CorruptionRule::AnyZeroSample;
  /// Aggregate-only populations (NIL, CTY) are never assigned by
  /// classification; they only supply a corruption rule.
  bool classifiable = true;

  bool matches(const ContractSnapshot &aggregate) const;
};

/// Rules in declaration order; classification picks the first match.
struct PopulationRules {
  std::vector<PopulationRule> rules;

  /// Documented default thresholds. These are configuration defaults, not
  /// values measured from any dataset.
  static PopulationRules defaults();

  const PopulationRule *find(const std::string &name) const;
};

struct WeatherReading {
  std::string station_id;
  LocalDateTime timestamp;
  std::optional<double> temperature_c;
  std::optional<double> relative_humidity;
  std::optional<double> radiation;
  std::optional<double> rainfall;
  std::optional<double> wind_speed;
};

struct EventRange {
  EventKind kind = EventKind::FashionWeek;
  DateRange range;
};

/// Machine-readable reasons attached to every dropped record, day or entity.
enum class DropReason {
  AmbiguousTimestamp,
  NonexistentLocalTime,
  OutsideGrid,
  IncompleteDay,
  CorruptedDay,
  TooManyIncompleteDays,
  TooManyCorruptedDays,
  TooFewDays,
  UnstableContract,
  Unclassified,
};
const char *to_string(DropReason reason) noexcept;

struct DropEntry {
  std::string entity_id;
  std::optional<Date> date; // empty for whole-entity drops
  DropReason reason = DropReason::IncompleteDay;
  std::size_t count = 1;    // records covered by a record-level entry
  std::string detail;
};

/// Sorts by entity, then date (entity-level entries first), then reason.
void sort_drop_report(std::vector<DropEntry> &report);

// --- Contract stability ---------------------------------------------------

/// max(x) - min(x) < 0.1 avg(x). Throws ZeroAverage when avg(x) == 0 and
/// InvalidArgument for an empty series.
bool stability_check(std::span<const double> series);

/// All five characteristics stable across the snapshots. A characteristic
/// that is identically zero (e.g. no generation) counts as stable.
bool entity_stable(std::span<const ContractSnapshot> snapshots);

/// Per-characteristic averages across the snapshots of one entity.
ContractSnapshot aggregate_contracts(std::span<const ContractSnapshot> snapshots);

/// Name of the first classifiable rule accepting `aggregate`, or
/// "Unclassified".
std::string classify_population(const ContractSnapshot &aggregate,
                                const PopulationRules &rules);

// --- Resampling -----------------------------------------------------------

struct ResampleResult {
  /// Days with every grid slot observed.
  CurveSet complete;
  /// Observed-slot count for every day with at least one accepted record.
  std::map<Date, std::size_t> slot_counts;
  std::vector<DropEntry> dropped;
};

/// Averages the readings falling in each grid interval [t_j, t_{j+1}).
/// Timestamps are local civil time: spring-forward days naturally lack the
/// skipped hour, and fall-back repeats share their slot. Exact duplicates
/// that cannot be explained by the fall-back repeat are dropped as
/// ambiguous. Results are keyed by entity id.
std::map<std::string, ResampleResult>
resample_to_grid(std::span<const MeasurementRecord> records, const TimeGrid &grid);

// --- Day filtering ---------------------------------------------------------

struct FilterOptions {
  double max_incomplete_fraction = 0.20;
  double max_corrupted_fraction = 0.10;
  std::size_t min_days = 1095;
};

struct FilterResult {
  CurveSet kept; // empty when the entity was removed
  bool entity_removed = false;
  std::vector<DropEntry> report;
};

bool is_corrupted(const DailyCurve &curve, CorruptionRule rule);

/// Three-step filter: incomplete days, corrupted days, minimum length. The
/// fraction denominators are the calendar days between the entity's first
/// and last observation inclusive. Days of `set` absent from `slot_counts`
/// count as complete.
FilterResult filter_days(const CurveSet &set, const std::map<Date, std::size_t> &slot_counts,
                         CorruptionRule rule, const FilterOptions &options = {});

// --- Aggregation ------------------------------------------------------------

/// Pointwise sum per region over the dates present for every member.
/// Entities without a region are ignored.
std::map<std::string, CurveSet>
aggregate_spatial(const std::map<std::string, CurveSet> &by_entity,
                  const std::map<std::string, std::string> &region_of);

struct WeatherAverage {
  std::vector<WeatherReading> city; // station_id "city", sorted by timestamp
  std::vector<LocalDateTime> gaps;  // timestamps with no reported variable
};

/// Unweighted per-variable mean across the stations reporting it.
WeatherAverage average_weather(std::span<const WeatherReading> readings);

struct DailyWeather {
  std::optional<double> temperature_c;
  std::optional<double> relative_humidity;
};

/// Daily means of the city temperature and humidity.
std::map<Date, DailyWeather> daily_weather(std::span<const WeatherReading> city);

// --- Calendar covariates ----------------------------------------------------

/// Throws InvalidArgument for dates before `origin`.
std::vector<DayDescriptor> build_day_descriptors(std::span<const Date> dates,
                                                 std::span<const EventRange> events,
                                                 const Date &origin);

} // namespace fpcaload
