#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace agenda::validate {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  std::string name;
  bool quick = false;  // part of the --quick subset
  std::function<CheckResult()> run;
};

// The acceptance checks, in criterion order. Each one pins its tolerances in
// code and reports what it measured.
const std::vector<Check>& acceptance_checks();

std::vector<CheckResult> run_checks(bool quick);

// Runs the checks and prints one pass/fail line per criterion; returns true
// when everything passed.
bool run_and_print(bool quick, std::ostream& log);

}  // namespace agenda::validate
