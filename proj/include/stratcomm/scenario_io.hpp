#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "stratcomm/game.hpp"

namespace stratcomm {

/// Name accepted in place of a path for the built-in binary instance.
inline constexpr std::string_view kBuiltinPaperIv = "paper-iv";

/// Parses a scenario document. Unknown keys anywhere in the schema are
/// rejected. Throws Error(kParse) on malformed JSON, Error(kValidation) or
/// Error(kDimensionMismatch) naming the offending table otherwise.
Scenario scenario_from_string(std::string_view text);

/// Loads a scenario file, or the built-in instance for "paper-iv".
Scenario load_scenario(const std::string& path_or_builtin);

/// Serializes a scenario in the file schema (two-space indent).
std::string scenario_to_string(const Scenario& s);

/// Compact canonical form: fixed key order, shortest round-trip numbers.
std::string scenario_canonical(const Scenario& s);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string scenario_digest(const Scenario& s);

}  // namespace stratcomm
