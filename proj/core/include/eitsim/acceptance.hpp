#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eitsim {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass = true;
};

// The physics regression suite: one result per claim, each with measured vs
// expected in the detail string. Prints a line per criterion to `progress` as
// it completes. `workers` feeds the transmission-map sweep.
AcceptanceReport run_acceptance(std::ostream& progress, int workers);

}  // namespace eitsim
