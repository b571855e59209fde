#pragma once

#include <optional>
#include <string>

namespace canonproc {

/// A named scalar with its Monte Carlo standard error (0 when exact).
struct Quantity {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

/// Outcome of comparing two suprema-type quantities.
///
/// ratio = numerator / denominator, with 0/0 defined as 0 and x/0 as +inf.
/// When `constant` is set, `violation` records whether
/// numerator > constant * denominator + 3 * combined standard error.
struct ComparisonReport {
  std::string relation;
  Quantity numerator;
  Quantity denominator;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
  std::optional<double> constant;
  bool violation = false;
};

double safe_ratio(double numerator, double denominator);

/// Fills ratio, its delta-method error and the violation flag.
ComparisonReport make_comparison(std::string relation, Quantity numerator,
                                 Quantity denominator,
                                 std::optional<double> constant);

}  // namespace canonproc
