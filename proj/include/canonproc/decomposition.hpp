#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "canonproc/core.hpp"
#include "canonproc/reports.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc {

/// t split into head (|t_i| > r, the l1 part) and tail (0 < |t_i| <= r, the
/// Gaussian part). head + tail == t exactly.
struct Split {
  Point head;
  Point tail;
};

Split threshold_split(const Point& t, double r);

/// Smallest integer p >= 1 with sqrt(p) * tail_norm >= k * s_b. nullopt
/// stands for the infinite index (tail_norm == 0 while k * s_b > 0).
std::optional<std::uint64_t> choose_p(double tail_norm, double k, double s_b);

/// Threshold rule: one global r, or one threshold per point.
struct SplitRule {
  std::vector<double> thresholds;  // size 1 (global) or |T|
  bool per_point() const { return thresholds.size() > 1; }
  double threshold_for(std::size_t point) const {
    return per_point() ? thresholds[point] : thresholds.front();
  }
};

/// Index lists J^1(t) (head) and J^2(t) (tail) for one point.
struct PointSplit {
  std::vector<std::size_t> head_indices;
  std::vector<std::size_t> tail_indices;
};

struct GridEvaluation {
  double threshold = 0.0;
  double ell1_sup = 0.0;
  double gamma2_bound = 0.0;
  double objective = 0.0;
};

struct DecompositionResult {
  SplitRule split;
  std::vector<PointSplit> point_splits;
  double ell1_sup = 0.0;
  double gamma2_bound = 0.0;
  double objective = 0.0;
  SupEstimate s_b_reference;
  double k_emp = 0.0;
  /// Every global threshold tried, in ascending order.
  std::vector<GridEvaluation> grid;
};

/// Scores a split rule: sup of the l1 norms of the heads plus the greedy
/// chain bound (exact Gaussian norms) of {0} together with the tails.
GridEvaluation evaluate_split(const FiniteSet& set, const SplitRule& rule);

struct DecompositionOptions {
  std::size_t samples = 100000;
  Seed seed{};
  std::size_t d_max = kDefaultDMax;
  /// After the global sweep, improve thresholds point by point.
  bool per_point = false;
};

/// Sweeps r over {0} and every distinct |t_i|, keeps the split minimising
/// ell1_sup + gamma2_bound, and measures S_B of T with the origin adjoined.
DecompositionResult decompose_by_sweep(const FiniteSet& set,
                                       const DecompositionOptions& options = {});

/// Both directions of the two-sided comparison: S_B / objective and
/// objective / S_B. Neither has a known constant, so nothing is flagged.
struct TwoSidedReport {
  ComparisonReport lower;
  ComparisonReport upper;
};

TwoSidedReport verify_two_sided(const FiniteSet& set,
                                const DecompositionResult& result);

/// True when the nonzero coordinates of distinct points never overlap.
bool has_disjoint_supports(std::span<const Point> points);

/// T with the origin appended when it is missing.
FiniteSet with_origin(const FiniteSet& set);

}  // namespace canonproc
