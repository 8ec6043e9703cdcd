// Acceptance suite: runs every validation check at its pinned tolerance and
// prints one pass/fail line per criterion. Exit code 0 only when all pass.

#include <cstdio>
#include <iostream>

#include "agenda/validate/suite.hpp"

int main() {
  bool all_pass = true;
  for (const agenda::validate::Check& check :
       agenda::validate::acceptance_checks()) {
    const agenda::validate::CheckResult result = check.run();
    std::printf("%s  %-22s %7.1fs  %s\n", result.pass ? "PASS" : "FAIL",
                result.name.c_str(), result.seconds, result.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria satisfied"
                               : "acceptance: FAILURES present");
  return all_pass ? 0 : 1;
}
