#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fpcaload/calendar.hpp"
#include "fpcaload/fpca.hpp"
#include "fpcaload/regress.hpp"

namespace fpcaload::cli {

inline constexpr const char *kModelMagic = "fpcaload-model";
inline constexpr int kModelVersion = 1;

/// Everything `predict` needs for one entity: the basis, the per-component
/// score models and the origin of `calendar_time`.
struct StoredModel {
  FpcaModel fpca;
  std::vector<ScoreRegressionModel> score_models;
  Date calendar_origin;
};

/// Line-oriented text with a version tag; reals use 17 significant digits
/// so a write/read cycle reproduces every value exactly.
void write_model(std::ostream &out, const StoredModel &model);
void save_model(const std::filesystem::path &path, const StoredModel &model);

/// Throws Error{ModelVersion} for a foreign or newer file and Error{Parse}
/// for malformed content.
StoredModel read_model(std::istream &in, const std::string &source = "<model>");
StoredModel load_model(const std::filesystem::path &path);

/// Filesystem-safe form of an entity id for per-entity output names.
std::string file_stem(const std::string &entity_id);

} // namespace fpcaload::cli
