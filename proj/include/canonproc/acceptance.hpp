#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "canonproc/serialize.hpp"

namespace canonproc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  Json data;
};

struct SuiteOptions {
  std::uint64_t seed = 2026;
  /// Criteria to run (1..10); empty means all.
  std::vector<int> only;
};

/// Runs one criterion. Criterion 10 reruns 1..9 twice and compares the
/// serialized reports byte for byte.
CriterionResult run_criterion(int id, const SuiteOptions& options);

struct SuiteRun {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
  Json report(const SuiteOptions& options) const;
};

/// Runs the selected criteria in order. `on_result` (optional) sees each
/// result as soon as it is available.
SuiteRun run_suite(const SuiteOptions& options,
                   const std::function<void(const CriterionResult&)>& on_result = {});

inline constexpr int kCriterionCount = 10;

}  // namespace canonproc
