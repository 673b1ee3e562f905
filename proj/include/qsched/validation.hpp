#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsched {

struct CheckResult {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<std::string> details;  // measured values, one per line
};

struct CheckSpec {
  std::string name;
  double budget_seconds;
  std::function<CheckResult()> run;
};

/// The end-to-end acceptance checks, in report order.
const std::vector<CheckSpec>& acceptance_checks();

/// Runs one check, times it, and fails it when it exceeds its budget.
CheckResult run_check(const CheckSpec& spec);

/// `PASS name (1.2 s)` followed by indented detail lines.
void print_check(std::ostream& out, const CheckResult& result);

}  // namespace qsched
