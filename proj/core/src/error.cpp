#include "fpcaload/error.hpp"

namespace fpcaload {

const char *to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EmptySet: return "EmptySet";
  case ErrorCode::ZeroScale: return "ZeroScale";
  case ErrorCode::NotNormalized: return "NotNormalized";
  case ErrorCode::InsufficientData: return "InsufficientData";
  case ErrorCode::GridMismatch: return "GridMismatch";
  case ErrorCode::TruncationTooLarge: return "TruncationTooLarge";
  case ErrorCode::DegenerateVariance: return "DegenerateVariance";
  case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
  case ErrorCode::DivisionByZeroActual: return "DivisionByZeroActual";
  case ErrorCode::ZeroTotalEnergy: return "ZeroTotalEnergy";
  case ErrorCode::ZeroVarianceActual: return "ZeroVarianceActual";
  case ErrorCode::ZeroActualNorm: return "ZeroActualNorm";
  case ErrorCode::ZeroVariance: return "ZeroVariance";
  case ErrorCode::ZeroAverage: return "ZeroAverage";
  case ErrorCode::AmbiguousTimestamp: return "AmbiguousTimestamp";
  case ErrorCode::NoData: return "NoData";
  case ErrorCode::Parse: return "ParseError";
  case ErrorCode::ModelVersion: return "ModelVersionMismatch";
  case ErrorCode::Misalignment: return "Misalignment";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

} // namespace fpcaload
