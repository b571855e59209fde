#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "canonproc/decomposition.hpp"
#include "canonproc/errors.hpp"
#include "helpers.hpp"

using namespace canonproc;

namespace {

FiniteSet blocks(std::uint64_t seed, std::size_t dim = 24, std::size_t count = 4, double b = 6) {
  return generate_set(SetKind::DisjointBlocks, dim, count, Seed{seed}, {&b, 1});
}

}  // namespace

TEST_SUITE("decomposition") {

TEST_CASE("threshold split") {
  const Point t({3.0, -0.5, 0.0, 1.0, -2.0});
  const auto s = threshold_split(t, 1.0);
  CHECK(s.head == Point({3.0, 0.0, 0.0, 0.0, -2.0}));
  CHECK(s.tail == Point({0.0, -0.5, 0.0, 1.0, 0.0}));
  CHECK(threshold_split(t, 0.0).head == t);
  CHECK(threshold_split(t, 0.0).tail.is_zero());
  CHECK(threshold_split(t, 3.0).tail == t);
  CHECK_THROWS_AS(threshold_split(t, -1.0), ParameterError);
}

TEST_CASE("property: splits reconstruct t with disjoint supports") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Point t(testing::random_vector(10, seed));
    for (double r : {0.0, 0.3, 0.8, 1.5, 10.0}) {
      const auto s = threshold_split(t, r);
      for (std::size_t i = 0; i < t.dim(); ++i) {
        CHECK(s.head[i] + s.tail[i] == t[i]);
        CHECK((s.head[i] == 0.0 || s.tail[i] == 0.0));
        if (s.tail[i] != 0.0) CHECK(std::abs(s.tail[i]) <= r);
      }
    }
  }
}

TEST_CASE("choose_p is the least p with sqrt(p) tail >= K S_B") {
  CHECK(choose_p(1.0, 1.0, 3.0) == 9u);
  CHECK(choose_p(1.0, 1.0, 3.01) == 10u);
  CHECK(choose_p(2.0, 0.5, 1.0) == 1u);
  CHECK(choose_p(1.0, 1.0, 0.0) == 1u);
  CHECK_FALSE(choose_p(0.0, 1.0, 2.0).has_value());
  CHECK_THROWS_AS(choose_p(1.0, 0.0, 1.0), ParameterError);
  for (double tail : {0.1, 0.7, 3.3}) {
    const auto p = choose_p(tail, 2.0, 1.7);
    REQUIRE(p.has_value());
    CHECK(std::sqrt(double(*p)) * tail >= 3.4);
    if (*p > 1) CHECK(std::sqrt(double(*p - 1)) * tail < 3.4);
  }
}

TEST_CASE("supports and origin") {
  const std::vector<Point> disjoint{Point({1.0, 0.0}), Point({0.0, 2.0})};
  const std::vector<Point> overlap{Point({1.0, 1.0}), Point({0.0, 2.0})};
  CHECK(has_disjoint_supports(disjoint));
  CHECK_FALSE(has_disjoint_supports(overlap));
  const FiniteSet s("s", disjoint);
  CHECK(with_origin(s).size() == 3);
  CHECK(with_origin(with_origin(s)).size() == 3);
}

TEST_CASE("grid end points") {
  const auto set = blocks(1);
  double max_l1 = 0.0, max_abs = 0.0;
  for (const auto& p : set.points()) {
    max_l1 = std::max(max_l1, p.norm1());
    for (double x : p.coords()) max_abs = std::max(max_abs, std::abs(x));
  }
  const auto low = evaluate_split(set, SplitRule{{0.0}});
  CHECK(low.gamma2_bound == 0.0);
  CHECK(low.ell1_sup == doctest::Approx(max_l1).epsilon(1e-15));
  const auto high = evaluate_split(set, SplitRule{{max_abs}});
  CHECK(high.ell1_sup == 0.0);
  CHECK(high.gamma2_bound > 0.0);
  CHECK_THROWS_AS(evaluate_split(set, SplitRule{{0.1, 0.2}}), ValidationError);
}

TEST_CASE("sweep returns the grid minimum over {0} and all |t_i|") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto set = blocks(seed);
    DecompositionOptions o;
    o.samples = 2000;
    o.seed = Seed{seed};
    const auto res = decompose_by_sweep(set, o);
    std::set<double> want{0.0};
    for (const auto& p : set.points()) {
      for (double x : p.coords()) {
        if (x != 0.0) want.insert(std::abs(x));
      }
    }
    REQUIRE(res.grid.size() == want.size());
    std::size_t k = 0;
    for (double r : want) CHECK(res.grid[k++].threshold == r);
    for (const auto& g : res.grid) CHECK(res.objective <= g.objective);
    CHECK(res.objective == res.ell1_sup + res.gamma2_bound);
    CHECK(res.point_splits.size() == set.size());
    CHECK(res.s_b_reference.method == SupMethod::MonteCarlo);
    CHECK(res.k_emp == doctest::Approx(res.objective / res.s_b_reference.value));
    const auto two = verify_two_sided(set, res);
    CHECK(std::isfinite(two.lower.ratio));
    CHECK(two.upper.ratio == doctest::Approx(res.k_emp));
  }
}

TEST_CASE("exact reference on small sets and per-point refinement") {
  const auto set = blocks(7, 12, 3, 4);
  DecompositionOptions o;
  o.samples = 1000;
  const auto global = decompose_by_sweep(set, o);
  CHECK(global.s_b_reference.method == SupMethod::Exact);
  o.per_point = true;
  const auto refined = decompose_by_sweep(set, o);
  CHECK(refined.split.thresholds.size() == set.size());
  CHECK(refined.objective <= global.objective * (1 + 1e-12));
}

}
