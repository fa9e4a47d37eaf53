#include <iostream>

#include "qb/acceptance.hpp"

int main() {
  qb::AcceptanceOptions options;
  auto results = qb::run_acceptance(options, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
