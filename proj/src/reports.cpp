#include "canonproc/reports.hpp"

#include <cmath>
#include <limits>

namespace canonproc {

double safe_ratio(double numerator, double denominator) {
  if (denominator == 0.0) {
    return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

ComparisonReport make_comparison(std::string relation, Quantity numerator,
                                 Quantity denominator,
                                 std::optional<double> constant) {
  ComparisonReport r;
  r.relation = std::move(relation);
  r.ratio = safe_ratio(numerator.value, denominator.value);
  if (std::isfinite(r.ratio) && numerator.value != 0.0 &&
      denominator.value != 0.0) {
    const double rel_num = numerator.std_error / std::abs(numerator.value);
    const double rel_den = denominator.std_error / std::abs(denominator.value);
    r.ratio_std_error = std::abs(r.ratio) * std::hypot(rel_num, rel_den);
  }
  if (constant) {
    const double slack =
        3.0 * std::hypot(numerator.std_error, *constant * denominator.std_error);
    r.violation = numerator.value > *constant * denominator.value + slack;
  }
  r.numerator = std::move(numerator);
  r.denominator = std::move(denominator);
  r.constant = constant;
  return r;
}

}  // namespace canonproc
