#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "yflash/config.hpp"

namespace yflash {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

/// Runs every acceptance criterion against the default configuration,
/// printing one PASS/FAIL line per criterion to log as it completes.
std::vector<CriterionResult> run_acceptance(std::ostream& log, std::uint64_t seed = 1);

/// Randomized property suites (10,000 trials each by default). Each entry
/// is (suite name, failure message or empty).
std::vector<std::pair<std::string, std::string>> run_property_suites(std::uint64_t seed, int trials);

}  // namespace yflash
