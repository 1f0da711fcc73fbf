#pragma once

// The acceptance suite: eleven numbered criteria, each printed as one
// PASS/FAIL line. Shared by the acceptance test binary and `verify-all`.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ks::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  ///< runtime limit, 0 when none
};

struct Options {
  /// Where the bundled scenarios live; empty means harness::bundled_scenario_dir().
  std::filesystem::path scenario_dir;
  /// Run only these criteria (1-based ids); empty runs all.
  std::vector<int> only;
};

/// Runs the criteria in order, printing a line per criterion to `out` as it
/// finishes. A criterion also fails when it exceeds its runtime budget.
std::vector<CriterionResult> run_all(const Options& options, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace ks::acceptance
