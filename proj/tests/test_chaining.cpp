#include <doctest.h>

#include <cmath>
#include <set>

#include "canonproc/chaining.hpp"
#include "canonproc/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace canonproc;

namespace {

Block blk(std::vector<std::size_t> members, std::size_t rep, std::size_t parent = Block::npos) {
  return Block{std::move(members), rep, parent};
}

double oracle_gamma(const FiniteSet& set, const MomentModel& model) {
  return oracle::gamma_bruteforce(set.size(), [&](std::size_t a, std::size_t b, std::size_t n) {
    return model.norm(set[b] - set[a], std::ldexp(1.0, int(n)));
  });
}

}  // namespace

TEST_SUITE("chaining") {

TEST_CASE("level budgets") {
  CHECK(level_budget(0) == 2);
  CHECK(level_budget(1) == 4);
  CHECK(level_budget(2) == 16);
  CHECK(level_budget(3) == 256);
  CHECK(level_budget(4) == 65536);
  CHECK(level_budget(5) == 4294967296ULL);
  CHECK(level_budget(6) == level_budget(40));
  CHECK(greedy_depth(1) == 0);
  CHECK(greedy_depth(2) == 1);
  CHECK(greedy_depth(4) == 1);
  CHECK(greedy_depth(5) == 2);
  CHECK(greedy_depth(17) == 3);
}

TEST_CASE("tree validation") {
  // Valid two-point tree.
  CHECK_NOTHROW(PartitionTree(2, {{blk({0, 1}, 0)}, {blk({0}, 0, 0), blk({1}, 1, 0)}}));
  // Not singletons at the leaves.
  CHECK_THROWS_AS(PartitionTree(2, {{blk({0, 1}, 0)}}), ValidationError);
  // Overlap.
  CHECK_THROWS_AS(PartitionTree(2, {{blk({0, 1}, 0)}, {blk({0, 1}, 0, 0), blk({1}, 1, 0)}}),
                  ValidationError);
  // Representative outside its block.
  CHECK_THROWS_AS(PartitionTree(2, {{blk({0, 1}, 0)}, {blk({0}, 1, 0), blk({1}, 1, 0)}}),
                  ValidationError);
  // Missing point.
  CHECK_THROWS_AS(PartitionTree(3, {{blk({0, 1, 2}, 0)}, {blk({0}, 0, 0), blk({1}, 1, 0)}}),
                  ValidationError);
  // Not nested.
  CHECK_THROWS_AS(PartitionTree(4, {{blk({0, 1, 2, 3}, 0)},
                                    {blk({0, 1}, 0, 0), blk({2, 3}, 2, 0)},
                                    {blk({0, 2}, 0, 0), blk({1}, 1, 0), blk({3}, 3, 1)}}),
                  ValidationError);
  // Budget: five blocks at level 1.
  CHECK_THROWS_AS(PartitionTree(5, {{blk({0, 1, 2, 3, 4}, 0)},
                                    {blk({0}, 0, 0), blk({1}, 1, 0), blk({2}, 2, 0),
                                     blk({3}, 3, 0), blk({4}, 4, 0)}}),
                  ValidationError);
}

TEST_CASE("greedy trees are admissible for many shapes") {
  for (std::size_t n : {1, 2, 3, 4, 5, 9, 16, 17, 40}) {
    const auto set = generate_set(SetKind::EllipsoidSample, 6, n, Seed{n});
    const auto tree = build_partition_greedy(set);
    CHECK_NOTHROW(validate_tree(n, tree.levels()));
    CHECK(tree.depth() == greedy_depth(n));
    CHECK(tree.level(0).front().representative == 0);
  }
}

TEST_CASE("two-point chain bound is the distance") {
  const FiniteSet s("pair", {Point({0.0, 0.0}), Point({3.0, 4.0})});
  const auto model = MomentModel::gaussian_exact();
  CHECK(chain_bound(s, build_partition_greedy(s), model).value == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(exhaustive_gamma(s, model).value == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(chain_bound(FiniteSet("one", {Point({1.0})}), build_partition_greedy(FiniteSet("one", {Point({1.0})})), model).value == 0.0);
}

TEST_CASE("exhaustive gamma matches brute-force enumeration of trees") {
  const MomentModel models[] = {MomentModel::gaussian_exact(), MomentModel::bernoulli_exact(),
                                MomentModel::bernoulli_proxy()};
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const std::size_t size = 2 + seed % 3;
    const auto set = generate_set(SetKind::RandomSphere, 3 + seed % 3, size, Seed{seed});
    for (const auto& m : models) {
      const auto got = exhaustive_gamma(set, m);
      CHECK(got.value == doctest::Approx(oracle_gamma(set, m)).epsilon(1e-12));
      CHECK_NOTHROW(validate_tree(size, got.tree.levels()));
    }
  }
}

TEST_CASE("property: exhaustive <= greedy and S_B <= 4 gamma on small sets") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto set = generate_set(SetKind::EllipsoidSample, 8, 1 + seed % 5, Seed{seed});
    for (const auto& m : {MomentModel::gaussian_exact(), MomentModel::bernoulli_exact()}) {
      const double best = exhaustive_gamma(set, m).value;
      CHECK(best <= chain_bound(set, build_partition_greedy(set), m).value * (1 + 1e-12));
    }
    const double gamma_b = exhaustive_gamma(set, MomentModel::bernoulli_exact()).value;
    CHECK(brute_force_bernoulli_sup(set).value <= 4 * gamma_b * (1 + 1e-12));
  }
  CHECK_THROWS_AS(exhaustive_gamma(generate_set(SetKind::RandomSphere, 3, 6, Seed{}),
                                   MomentModel::gaussian_exact()),
                  CapacityError);
}

TEST_CASE("property: chain bound scales linearly") {
  const auto set = generate_set(SetKind::RandomSphere, 7, 20, Seed{3});
  const auto big = set.scaled(2.0, "big");
  const auto model = MomentModel::gaussian_exact();
  CHECK(chain_bound(big, build_partition_greedy(big), model).value ==
        doctest::Approx(2 * chain_bound(set, build_partition_greedy(set), model).value).epsilon(1e-13));
}

TEST_CASE("chain bound rejects a tree for another set") {
  const auto a = generate_set(SetKind::RandomSphere, 3, 4, Seed{1});
  const auto b = generate_set(SetKind::RandomSphere, 3, 5, Seed{1});
  CHECK_THROWS_AS(chain_bound(a, build_partition_greedy(b), MomentModel::gaussian_exact()),
                  ValidationError);
}

TEST_CASE("sum-set combiner") {
  const auto model = MomentModel::gaussian_exact();
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto a = generate_set(SetKind::RandomSphere, 5, 2 + seed % 6, Seed{seed});
    const auto b = generate_set(SetKind::CubeVertices, 5, 2 + (seed * 3) % 7, Seed{seed});
    const auto ta = build_partition_greedy(a), tb = build_partition_greedy(b);
    const auto sum = combine_sum_set(a, ta, b, tb);
    std::set<std::vector<double>> expect;
    for (const auto& x : a.points()) {
      for (const auto& y : b.points()) {
        const auto z = x + y;
        expect.emplace(z.coords().begin(), z.coords().end());
      }
    }
    CHECK(sum.set.size() == expect.size());
    for (const auto& z : sum.set.points()) CHECK(expect.count({z.coords().begin(), z.coords().end()}) == 1);
    CHECK_NOTHROW(validate_tree(sum.set.size(), sum.tree.levels()));
    const double lhs = chain_bound(sum.set, sum.tree, model).value;
    const double rhs = chain_bound(a, ta, model).value + chain_bound(b, tb, model).value;
    CHECK(lhs <= std::sqrt(3.0) * rhs * (1 + 1e-12));
  }
}

TEST_CASE("sum-set combiner with coinciding sums") {
  const FiniteSet a("a", {Point({0.0}), Point({1.0})});
  const FiniteSet b("b", {Point({0.0}), Point({1.0}), Point({2.0})});
  const auto sum = combine_sum_set(a, build_partition_greedy(a), b, build_partition_greedy(b));
  CHECK(sum.set.size() == 4);
  CHECK_NOTHROW(validate_tree(4, sum.tree.levels()));
}

TEST_CASE("supremum against four times the chain bound") {
  const auto set = generate_set(SetKind::RandomSphere, 10, 16, Seed{2});
  const auto rep = verify_theorem2(set, ProcessKind::Bernoulli, 1000, Seed{2});
  CHECK_FALSE(rep.violation);
  REQUIRE(rep.constant.has_value());
  CHECK(*rep.constant == 4.0);
  CHECK(rep.ratio <= 4.0);
  CHECK(rep.numerator.std_error == 0.0);
  const auto g = verify_theorem2(set, ProcessKind::Gaussian, 20000, Seed{2});
  CHECK_FALSE(g.violation);
  CHECK(g.numerator.std_error > 0.0);
}

}
