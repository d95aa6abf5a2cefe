#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fpcaload/cli/config.hpp"
#include "fpcaload/error.hpp"

namespace fpcaload::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

/// Exit status for a library failure: data problems map to 2, numerical
/// failures to 3.
int exit_code_for(ErrorCode code) noexcept;

// Each command throws ConfigError or fpcaload::Error; run_cli maps them to
// exit codes. `log` receives progress lines and warnings.
void cmd_ingest(const RunConfig &config, std::ostream &log);
void cmd_fit(const RunConfig &config, std::ostream &log);
void cmd_predict(const RunConfig &config, std::ostream &log);
void cmd_evaluate(const RunConfig &config, std::ostream &log);
void cmd_scores_report(const RunConfig &config, std::ostream &log);

/// Parses `args` (without the program name) and runs one subcommand.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fpcaload::cli
