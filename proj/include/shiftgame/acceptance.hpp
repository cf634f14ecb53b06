#pragma once

#include <string>
#include <vector>

namespace shiftgame::acceptance {

// One verdict per criterion of the acceptance gate. `detail` is a short
// human-readable summary: check counts on success, the first failing check
// otherwise.
struct CriterionResult {
  int index = 0;
  std::string label;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs every criterion in order, never throwing: a criterion that fails an
// internal precondition reports FAIL with the error text instead.
std::vector<CriterionResult> run_all();

bool all_pass(const std::vector<CriterionResult>& results);

// One line per criterion: "PASS  3  <label>  (<detail>, <t> s)".
std::string report_lines(const std::vector<CriterionResult>& results);

}  // namespace shiftgame::acceptance
