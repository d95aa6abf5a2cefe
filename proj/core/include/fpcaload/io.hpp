#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fpcaload/curves.hpp"
#include "fpcaload/pipeline.hpp"

namespace fpcaload::io {

// Readers for the input file formats. Parse failures throw Error{Parse}
// with the file name and 1-based line number in the message.

/// `entity_id,timestamp,power_kw`
std::vector<MeasurementRecord> read_measurements(const std::filesystem::path &path);

/// `entity_id,start_date,end_date,contract_kw,frac_res,frac_plt,gen_kw,frac_pv`
std::vector<ContractSnapshot> read_contracts(const std::filesystem::path &path);

/// `station_id,timestamp,temp_c,rh_pct,radiation,rainfall,wind`; empty cells
/// are missing values.
std::vector<WeatherReading> read_weather(const std::filesystem::path &path);

/// `event_name,start_date,end_date`, dates inclusive.
std::vector<EventRange> read_events(const std::filesystem::path &path);

/// `entity_id,region`
std::map<std::string, std::string> read_region_map(const std::filesystem::path &path);

/// Key-value population rules, e.g.
///   order = PVG, PLT, RES, NRS, MIX, NIL, CTY
///   RES.frac_res >= 0.95
///   RES.corruption = any_zero_sample
///   NIL.classify = false
PopulationRules parse_population_rules(const std::string &text,
                                       const std::string &source = "<rules>");
PopulationRules read_population_rules(const std::filesystem::path &path);

enum class EuniteGrid { HalfHourly48, TwoHourly12 };

/// EUNITE competition load table. Each data row holds a date followed by 48
/// half-hourly loads; the date is either one token (`YYYY-MM-DD`,
/// `M/D/YYYY` or `YYYYMMDD`) or three integer columns `year,month,day`.
/// Separators may be commas, semicolons, tabs or spaces; non-numeric header
/// rows are skipped. The two-hourly grid averages blocks of four readings.
CurveSet read_eunite_load(const std::filesystem::path &path, EuniteGrid grid,
                          const std::string &entity_id = "eunite");

} // namespace fpcaload::io
