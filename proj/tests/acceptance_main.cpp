#include <cstdio>

#include "canonproc/acceptance.hpp"

int main() {
  canonproc::SuiteOptions options;
  const auto run = canonproc::run_suite(options, [](const canonproc::CriterionResult& r) {
    std::printf("[%s] criterion %d: %s -- %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.summary.c_str());
    std::fflush(stdout);
  });
  return run.all_passed() ? 0 : 1;
}
