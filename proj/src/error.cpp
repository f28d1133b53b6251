#include "stratcomm/error.hpp"

namespace stratcomm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kZeroProbabilityObservation: return "ZeroProbabilityObservation";
    case ErrorKind::kBarycenterMismatch: return "BarycenterMismatch";
    case ErrorKind::kSingularPair: return "SingularPair";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kEnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::kUsage: return "UsageError";
  }
  return "Error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kNoConvergence: return 3;
    case ErrorKind::kUsage: return 4;
    default: return 2;
  }
}

}  // namespace stratcomm
