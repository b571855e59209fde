#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canonproc/core.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/reports.hpp"

namespace canonproc {

/// A map phi known through its values on T: image[correspondence[i]] is
/// phi(source[i]). The image may repeat points (phi need not be injective).
class MappedPair {
 public:
  MappedPair(FiniteSet source, std::vector<Point> image,
             std::vector<std::size_t> correspondence);
  /// Identity correspondence.
  MappedPair(FiniteSet source, std::vector<Point> image);

  const FiniteSet& source() const noexcept { return source_; }
  std::span<const Point> image() const noexcept { return image_; }
  std::span<const std::size_t> correspondence() const noexcept { return correspondence_; }
  /// phi(source[i]).
  const Point& image_of(std::size_t i) const { return image_[correspondence_[i]]; }

 private:
  FiniteSet source_;
  std::vector<Point> image_;
  std::vector<std::size_t> correspondence_;
};

/// Built-in coordinatewise maps.
struct CoordinateMap {
  enum class Kind { Scale, Clamp, Abs, SoftThreshold };
  Kind kind = Kind::Abs;
  double a = 0.0;  // Scale: factor; Clamp: lower bound; SoftThreshold: level
  double b = 0.0;  // Clamp: upper bound

  static CoordinateMap scale(double c) { return {Kind::Scale, c, 0.0}; }
  static CoordinateMap clamp(double lo = -1.0, double hi = 1.0) {
    return {Kind::Clamp, lo, hi};
  }
  static CoordinateMap abs() { return {Kind::Abs, 0.0, 0.0}; }
  static CoordinateMap soft_threshold(double level) {
    return {Kind::SoftThreshold, level, 0.0};
  }

  double operator()(double x) const;
  std::string describe() const;
};

/// Parses "abs", "clamp", "clamp:lo:hi", "scale:c", "soft:level".
CoordinateMap parse_coordinate_map(std::string_view spec);

MappedPair apply_coordinate_map(const FiniteSet& set, const CoordinateMap& map);

/// Squared l2 norm of t - s with its min(p, d) largest coordinates dropped.
double trimmed_sq_distance(const Point& s, const Point& t, std::size_t p);

/// All trimmed squared norms of one increment: value(p) for every p >= 0 in
/// O(1) after an O(d log d) setup. Summation runs over ascending squares, so
/// a coordinatewise dominated increment never gets a larger value.
class TrimmedProfile {
 public:
  explicit TrimmedProfile(std::span<const double> increment);
  double value(std::size_t p) const;
  std::size_t dim() const noexcept { return prefix_.size() - 1; }

 private:
  std::vector<double> prefix_;  // prefix_[m] = sum of the m smallest squares
};

/// One condition instance: compare the image increment (lhs) against the
/// source increment (rhs), tagged with the indices that produced it.
struct IncrementPair {
  TrimmedProfile lhs;
  TrimmedProfile rhs;
  std::size_t first = 0;
  std::size_t second = 0;
};

struct ConditionWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t p = 0;
};

struct ConditionCheck {
  bool holds = true;
  /// max over instances and p of lhs - C^2 * rhs.
  double margin = 0.0;
  ConditionWitness worst;
};

/// trim_lhs(floor(C p)) <= C^2 trim_rhs(p) for p = 0..p_max.
ConditionCheck check_increments(std::span<const IncrementPair> increments,
                                double c, std::size_t p_max);

std::vector<IncrementPair> pair_increments(const MappedPair& pair);

ConditionCheck check_condition(const MappedPair& pair, double c,
                               std::size_t p_max);

inline constexpr double kDefaultTolerance = 1e-6;
/// Relative slack (against the untrimmed squared distances of the pair)
/// absorbed as floating-point rounding when checking the condition.
inline constexpr double kConditionRoundingSlack = 1e-12;
inline constexpr double kDefaultCCap = 1024.0;

/// Smallest feasible constant found by doubling then bisection.
struct ContractionReport {
  std::optional<double> c_star;  // nullopt: infeasible up to the cap
  std::size_t p_max = 0;
  ConditionWitness worst;
  double margin = 0.0;
  double tolerance = kDefaultTolerance;
  double cap = kDefaultCCap;
  std::string budget_rule = "floor";
};

ContractionReport fit_min_c_increments(std::span<const IncrementPair> increments,
                                       std::size_t p_max,
                                       double tol = kDefaultTolerance,
                                       double cap = kDefaultCCap);

ContractionReport fit_min_C(const MappedPair& pair, std::size_t p_max,
                            double tol = kDefaultTolerance,
                            double cap = kDefaultCCap);

/// S_B(phi(T)) against S_B(T); each side exact when its dim <= d_max.
ComparisonReport compare_suprema(const MappedPair& pair, std::size_t samples,
                                 Seed seed, std::size_t d_max = kDefaultDMax);

}  // namespace canonproc
