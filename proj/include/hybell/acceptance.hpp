#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybell {

struct AcceptanceOptions {
  bool fast = false;       // skip the two curve-limit criteria
  double density = 1.0;    // grid density factor (selftest may thin the grids)
  bool inject_fault = false;
};

enum class CriterionStatus { Pass, Fail, Skipped };

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::Fail;
  std::string detail;
  double seconds = 0.0;
  /// Fails for reasons analysed offline; reported as FAIL regardless.
  bool known_gap = false;
};

/// Runs the acceptance criteria in order, printing one line per criterion to
/// `log` as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

std::string format_result(const CriterionResult& r);

/// `HYBELL_SELFTEST_FAULT=1` turns on fault injection (used to test the
/// failure path of the harness).
bool fault_injection_requested();

}  // namespace hybell
