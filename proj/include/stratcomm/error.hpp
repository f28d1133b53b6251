#pragma once

#include <stdexcept>
#include <string>

namespace stratcomm {

enum class ErrorKind {
  kParse,
  kValidation,
  kDimensionMismatch,
  kZeroProbabilityObservation,
  kBarycenterMismatch,
  kSingularPair,
  kOutOfRange,
  kNoConvergence,
  kEnumerationTooLarge,
  kUsage,
};

/// Error carrying a machine-readable kind. Every failure surfaced by the
/// library is one of these; the CLI maps the kind to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// 2 validation, 3 numerical non-convergence, 4 usage.
int exit_code(ErrorKind kind) noexcept;

}  // namespace stratcomm
