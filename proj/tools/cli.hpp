#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qb/report.hpp"

namespace qb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMath = 1;
inline constexpr int kExitPrecision = 2;
inline constexpr int kExitUsage = 64;

/// Parses arguments (without the program name), runs the subcommand and
/// writes the report to `out`; usage errors go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs one subcommand from its normalized inputs and returns the full
/// qb-1 document. Throws MathError, PrecisionError or InputError.
Json run_command(const std::string& command, const Json& inputs);

/// "path: value" lines for every leaf of the document.
std::string render_text(const Json& doc);

}  // namespace qb::cli
