#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpcaload {

enum class ErrorCode {
  EmptySet,
  ZeroScale,
  NotNormalized,
  InsufficientData,
  GridMismatch,
  TruncationTooLarge,
  DegenerateVariance,
  RankDeficientDesign,
  DivisionByZeroActual,
  ZeroTotalEnergy,
  ZeroVarianceActual,
  ZeroActualNorm,
  ZeroVariance,
  ZeroAverage,
  AmbiguousTimestamp,
  NoData,
  Parse,
  ModelVersion,
  Misalignment,
  InvalidArgument,
  Io,
};

const char *to_string(ErrorCode code) noexcept;

/// Single exception type thrown by the library; the code identifies the
/// failure class, and `indices()` carries offending positions when the
/// failure is positional (e.g. zero actual values in a percentage metric).
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message,
        std::vector<std::size_t> indices = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code), indices_(std::move(indices)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t> &indices() const noexcept { return indices_; }

private:
  ErrorCode code_;
  std::vector<std::size_t> indices_;
};

} // namespace fpcaload
