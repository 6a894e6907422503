#pragma once

// Property suites run by `idpdg verify`: each line reports a measured value
// against its threshold.

#include <ostream>
#include <string>
#include <vector>

namespace idpdg {

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct Report {
  std::vector<Check> checks;

  void below(const std::string& name, double value, double threshold) {
    checks.push_back({name, value, threshold, value < threshold});
  }
  void at_least(const std::string& name, double value, double threshold) {
    checks.push_back({name, value, threshold, value >= threshold});
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// closure, quadrature, pseudo, idp, freestream, conservation
const std::vector<std::string>& verify_suites();

/// Runs one suite, or every suite for "all". Throws std::invalid_argument on
/// an unknown name.
Report run_verify(const std::string& suite);

/// `name value threshold PASS|FAIL`, one line per check.
void print_report(std::ostream& os, const Report& report);

}  // namespace idpdg
