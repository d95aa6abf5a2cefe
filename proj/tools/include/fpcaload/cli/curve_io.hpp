#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "fpcaload/curves.hpp"

namespace fpcaload::cli {

/// Long-format curve table `entity_id,date,time,power_kw`, shared by the
/// cleaned-curve output of `ingest` and the forecast output of `predict`.
/// Rows are grouped by entity, then date, then grid time; values use 12
/// significant digits.
void write_curves_csv(const std::filesystem::path &path,
                      const std::map<std::string, CurveSet> &sets);

/// Rebuilds one CurveSet per entity. Each entity's grid is the sorted set of
/// its distinct times; every date must carry every grid time exactly once.
std::map<std::string, CurveSet> read_curves_csv(const std::filesystem::path &path);

} // namespace fpcaload::cli
