#include "canonproc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "canonproc/chaining.hpp"
#include "canonproc/errors.hpp"

namespace canonproc {

Split threshold_split(const Point& t, double r) {
  if (!(r >= 0.0)) throw ParameterError("r", "threshold must be >= 0");
  std::vector<double> head(t.dim(), 0.0), tail(t.dim(), 0.0);
  for (std::size_t i = 0; i < t.dim(); ++i) {
    const double a = std::abs(t[i]);
    if (a > 0.0 && a <= r) {
      tail[i] = t[i];
    } else {
      head[i] = t[i];
    }
  }
  return {Point(std::move(head)), Point(std::move(tail))};
}

std::optional<std::uint64_t> choose_p(double tail_norm, double k, double s_b) {
  if (!(k > 0.0)) throw ParameterError("K", "must be positive");
  if (!(s_b >= 0.0)) throw ParameterError("s_b", "must be >= 0");
  if (!(tail_norm >= 0.0)) throw ParameterError("tail_norm", "must be >= 0");
  const double target = k * s_b;
  if (target <= 0.0) return 1;
  if (tail_norm == 0.0) return std::nullopt;
  const double ratio = target / tail_norm;
  const double guess = std::ceil(ratio * ratio);
  if (guess >= 0x1.0p63) return std::numeric_limits<std::uint64_t>::max();
  auto p = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(guess));
  // Correct the rounding of the closed form against the defining inequality.
  while (std::sqrt(double(p)) * tail_norm < target) ++p;
  while (p > 1 && std::sqrt(double(p - 1)) * tail_norm >= target) --p;
  return p;
}

bool has_disjoint_supports(std::span<const Point> points) {
  if (points.empty()) return true;
  std::vector<bool> used(points.front().dim(), false);
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (p[i] == 0.0) continue;
      if (used[i]) return false;
    }
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (p[i] != 0.0) used[i] = true;
    }
  }
  return true;
}

FiniteSet with_origin(const FiniteSet& set) {
  const Point origin = Point::zero(set.dim());
  if (set.contains(origin)) return set;
  std::vector<Point> points(set.points().begin(), set.points().end());
  points.push_back(origin);
  return FiniteSet(set.name(), std::move(points));
}

GridEvaluation evaluate_split(const FiniteSet& set, const SplitRule& rule) {
  if (rule.thresholds.empty() ||
      (rule.per_point() && rule.thresholds.size() != set.size())) {
    throw ValidationError("split rule needs one threshold or one per point");
  }
  GridEvaluation eval;
  eval.threshold = rule.thresholds.front();
  std::vector<Point> tails{Point::zero(set.dim())};
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto [head, tail] = threshold_split(set[i], rule.threshold_for(i));
    eval.ell1_sup = std::max(eval.ell1_sup, head.norm1());
    tails.push_back(std::move(tail));
  }
  const FiniteSet tail_set("tails", distinct_points(tails));
  eval.gamma2_bound =
      chain_bound(tail_set, build_partition_greedy(tail_set),
                  MomentModel::gaussian_exact())
          .value;
  eval.objective = eval.ell1_sup + eval.gamma2_bound;
  return eval;
}

namespace {

std::vector<double> threshold_grid(std::span<const Point> points) {
  std::vector<double> grid{0.0};
  for (const auto& p : points) {
    for (double x : p.coords()) {
      if (x != 0.0) grid.push_back(std::abs(x));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

DecompositionResult decompose_by_sweep(const FiniteSet& set,
                                       const DecompositionOptions& options) {
  DecompositionResult result;
  const auto grid = threshold_grid(set.points());
  std::size_t best = 0;
  for (double r : grid) {
    result.grid.push_back(evaluate_split(set, SplitRule{{r}}));
    if (result.grid.back().objective < result.grid[best].objective) {
      best = result.grid.size() - 1;
    }
  }
  result.split = SplitRule{{grid[best]}};
  GridEvaluation chosen = result.grid[best];

  if (options.per_point && set.size() > 1) {
    SplitRule rule{std::vector<double>(set.size(), grid[best])};
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t i = 0; i < set.size(); ++i) {
        for (double r : threshold_grid(set.points().subspan(i, 1))) {
          if (r == rule.thresholds[i]) continue;
          SplitRule trial = rule;
          trial.thresholds[i] = r;
          const GridEvaluation eval = evaluate_split(set, trial);
          if (eval.objective < chosen.objective) {
            chosen = eval;
            rule = std::move(trial);
            improved = true;
          }
        }
      }
    }
    result.split = std::move(rule);
  }

  result.ell1_sup = chosen.ell1_sup;
  result.gamma2_bound = chosen.gamma2_bound;
  result.objective = chosen.objective;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double r = result.split.threshold_for(i);
    PointSplit ps;
    for (std::size_t j = 0; j < set.dim(); ++j) {
      const double a = std::abs(set[i][j]);
      if (a == 0.0) continue;
      (a <= r ? ps.tail_indices : ps.head_indices).push_back(j);
    }
    result.point_splits.push_back(std::move(ps));
  }
  const FiniteSet anchored = with_origin(set);
  result.s_b_reference =
      bernoulli_sup(anchored.points(), options.samples, options.seed, options.d_max);
  result.k_emp = safe_ratio(result.objective, result.s_b_reference.value);
  return result;
}

TwoSidedReport verify_two_sided(const FiniteSet& set,
                                const DecompositionResult& result) {
  const Quantity s_b{"S_B(T u {0})", result.s_b_reference.value,
                     result.s_b_reference.std_error};
  const Quantity objective{"ell1_sup + gamma2_bound(" + set.name() + ")",
                           result.objective, 0.0};
  return {make_comparison("S_B(T) >= objective / K", s_b, objective, std::nullopt),
          make_comparison("objective <= K * S_B(T)", objective, s_b, std::nullopt)};
}

}  // namespace canonproc
