#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qb {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  long precision = 32;  // criterion 9 compares against twice this
  std::uint64_t seed = 20240917;
  unsigned threads = 4;
  long corollary_bound = 30;
  long rational_height = 20;
};

/// Runs the nine acceptance checks in order, writing one PASS/FAIL line per
/// check to `out` as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

std::string format_line(const CriterionResult& r);

}  // namespace qb
