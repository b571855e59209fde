#include <doctest.h>

#include <cmath>

#include "canonproc/contraction.hpp"
#include "canonproc/errors.hpp"
#include "canonproc/suprema.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace canonproc;

TEST_SUITE("contraction") {

TEST_CASE("trimmed distance matches subset enumeration") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = testing::random_vector(8, seed, "a");
    const auto t = testing::random_vector(8, seed, "b");
    std::vector<double> diff(8);
    for (std::size_t i = 0; i < 8; ++i) diff[i] = t[i] - s[i];
    const TrimmedProfile profile(diff);
    for (std::size_t p = 0; p <= 9; ++p) {
      const double want = oracle::trimmed_sq(s, t, p);
      CHECK(trimmed_sq_distance(Point(s), Point(t), p) == doctest::Approx(want).epsilon(1e-12));
      CHECK(profile.value(p) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("coordinate maps") {
  CHECK(CoordinateMap::abs()(-2.0) == 2.0);
  CHECK(CoordinateMap::clamp()(3.0) == 1.0);
  CHECK(CoordinateMap::clamp()(-0.25) == -0.25);
  CHECK(CoordinateMap::soft_threshold(0.5)(-2.0) == -1.5);
  CHECK(CoordinateMap::soft_threshold(0.5)(0.25) == 0.0);
  CHECK(CoordinateMap::scale(3.0)(2.0) == 6.0);
  CHECK(parse_coordinate_map("abs").kind == CoordinateMap::Kind::Abs);
  const auto c = parse_coordinate_map("clamp:-2:0.5");
  CHECK(c.a == -2.0);
  CHECK(c.b == 0.5);
  CHECK(parse_coordinate_map("scale:2.5").a == 2.5);
  CHECK(parse_coordinate_map("soft:0.1").a == 0.1);
  CHECK(parse_coordinate_map(c.describe()).b == 0.5);
  CHECK_THROWS_AS(parse_coordinate_map("warp"), ParameterError);
  CHECK_THROWS_AS(parse_coordinate_map("scale:x"), ParameterError);
  CHECK_THROWS_AS(parse_coordinate_map("clamp:1:0"), ParameterError);
}

TEST_CASE("mapped pair validation") {
  const auto set = generate_set(SetKind::RandomSphere, 3, 3, Seed{1});
  const std::vector<Point> two{Point({1.0}), Point({2.0})};
  CHECK_THROWS_AS(MappedPair(set, two), ValidationError);
  const std::vector<Point> three{Point({1.0}), Point({2.0}), Point({1.0})};
  CHECK_NOTHROW(MappedPair(set, three));
  CHECK_THROWS_AS(MappedPair(set, three, {0, 0, 1}), ValidationError);
  CHECK_THROWS_AS(MappedPair(set, three, {0, 1, 3}), ValidationError);
  const MappedPair p(set, three, {2, 0, 1});
  CHECK(p.image_of(0) == Point({1.0}));
  CHECK(p.image_of(2) == Point({2.0}));
}

TEST_CASE("property: 1-Lipschitz coordinate maps satisfy the condition at C = 1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double radius = 2.0;
    const auto set = generate_set(SetKind::RandomSphere, 7, 9, Seed{seed}, {&radius, 1});
    for (const auto& m : {CoordinateMap::abs(), CoordinateMap::clamp(-0.5, 1.0),
                          CoordinateMap::soft_threshold(0.3), CoordinateMap::scale(-1.0)}) {
      CHECK(check_condition(apply_coordinate_map(set, m), 1.0, set.dim()).holds);
    }
  }
}

TEST_CASE("c_star of a scaling is max(|c|, 1)") {
  const auto set = generate_set(SetKind::EllipsoidSample, 6, 8, Seed{3});
  for (double c : {0.25, 1.0, 1.5, -3.0, 7.0}) {
    const auto rep = fit_min_C(apply_coordinate_map(set, CoordinateMap::scale(c)), set.dim());
    REQUIRE(rep.c_star.has_value());
    CHECK(*rep.c_star == doctest::Approx(std::max(std::abs(c), 1.0)).epsilon(1e-6));
    CHECK(rep.budget_rule == "floor");
  }
  const auto none = fit_min_C(apply_coordinate_map(set, CoordinateMap::scale(5000.0)), set.dim());
  CHECK_FALSE(none.c_star.has_value());
}

TEST_CASE("property: feasibility is monotone in C") {
  const auto set = generate_set(SetKind::RandomSphere, 5, 7, Seed{9});
  std::vector<Point> image;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto noise = testing::random_vector(5, i, "noise");
    std::vector<double> v(5);
    for (std::size_t j = 0; j < 5; ++j) v[j] = (1.0 + j) * set[i][j] + 0.2 * noise[j];
    image.emplace_back(v);
  }
  const MappedPair pair(set, image);
  bool seen_true = false;
  for (double c = 1.0; c <= 12.0; c += 0.125) {
    const bool holds = check_condition(pair, c, 5).holds;
    if (seen_true) CHECK(holds);
    seen_true |= holds;
  }
  CHECK(seen_true);
  const auto rep = fit_min_C(pair, 5);
  REQUIRE(rep.c_star.has_value());
  CHECK(check_condition(pair, *rep.c_star, 5).holds);
  CHECK_FALSE(check_condition(pair, *rep.c_star - 1e-3, 5).holds);
}

TEST_CASE("suprema comparison") {
  const auto set = generate_set(SetKind::RandomSphere, 8, 10, Seed{4});
  const MappedPair id(set, std::vector<Point>(set.points().begin(), set.points().end()));
  CHECK(compare_suprema(id, 100, Seed{}).ratio == 1.0);

  std::vector<Point> permuted;
  for (const auto& p : set.points()) {
    std::vector<double> v(p.coords().rbegin(), p.coords().rend());
    permuted.emplace_back(v);
  }
  const auto perm = compare_suprema(MappedPair(set, permuted), 100, Seed{});
  CHECK(perm.ratio == doctest::Approx(1.0).epsilon(1e-13));

  const auto clamp = compare_suprema(apply_coordinate_map(set, CoordinateMap::clamp()), 100, Seed{});
  CHECK(clamp.ratio <= 1.0 + 1e-12);
  CHECK_FALSE(clamp.constant.has_value());
}

}
