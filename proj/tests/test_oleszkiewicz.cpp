#include <doctest.h>

#include <cmath>

#include "canonproc/errors.hpp"
#include "canonproc/oleszkiewicz.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace canonproc;

namespace {

VectorSystem random_system(std::size_t n, std::size_t m, std::uint64_t seed, NormTag tag) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(testing::random_vector(m, seed * 100 + i, "system"));
  return VectorSystem(rows, tag);
}

// E||sum eps_i x_i|| by looping over sign masks.
double oracle_strong(const VectorSystem& x) {
  const std::size_t n = x.terms(), m = x.ambient_dim();
  long double acc = 0.0L;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    std::vector<double> v(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) v[j] += ((mask >> i) & 1UL ? -1.0 : 1.0) * x.vector(i)[j];
    }
    acc += x.norm_of(v);
  }
  return double(acc / (1UL << n));
}

}  // namespace

TEST_SUITE("oleszkiewicz") {

TEST_CASE("system documents") {
  const auto x = random_system(3, 4, 1, NormTag::Sup);
  const auto y = parse_system(format_system(x));
  CHECK(y.vectors() == x.vectors());
  CHECK(y.norm() == NormTag::Sup);
  CHECK_THROWS_AS(parse_system(R"({"norm": "l7", "vectors": [[1]]})"), ParameterError);
  CHECK_THROWS_AS(parse_system(R"({"norm": "sup", "vectors": [[1], [1, 2]]})"), ValidationError);
  CHECK_THROWS_AS(parse_system(R"({"norm": "sup", "vectors": []})"), ValidationError);
  try {
    parse_system(R"({"norm": "sup", "vectors": [[1, true]]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.location() == "vectors[0][1]");
  }
}

TEST_CASE("functionals lie in the dual ball") {
  const auto sup = sample_functionals(4, NormTag::Sup, 10, Seed{1});
  CHECK(sup.size() == 18);
  CHECK(sup[0][0] == 1.0);
  CHECK(sup[1][0] == -1.0);
  for (std::size_t k = 0; k < sup.size(); ++k) {
    double l1 = 0.0;
    for (double v : sup[k]) l1 += std::abs(v);
    CHECK(l1 <= 1.0 + 1e-12);
  }
  const auto euc = sample_functionals(4, NormTag::Euclidean, 10, Seed{1});
  CHECK(euc.size() == 10);
  for (std::size_t k = 0; k < euc.size(); ++k) {
    double l2 = 0.0;
    for (double v : euc[k]) l2 += v * v;
    CHECK(std::sqrt(l2) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(FunctionalSample({{2.0, 0.0}}, NormTag::Euclidean, Seed{}), ValidationError);
}

TEST_CASE("weak constants of identical and scaled systems") {
  const auto x = random_system(5, 3, 2, NormTag::Euclidean);
  const auto f = sample_functionals(3, NormTag::Euclidean, 20, Seed{2});
  CHECK(weak_moment_constant(x, x, f, 6).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weak_moment_constant(x.scaled(2.0), x, f, 6).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(weak_moment_constant(x, x.scaled(2.0), f, 6).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("check_ole6 on scaled systems") {
  const auto y = random_system(4, 3, 3, NormTag::Sup);
  const auto f = sample_functionals(3, NormTag::Sup, 10, Seed{3});
  for (double c : {0.5, 2.0, 3.0}) {
    const auto rep = check_ole6(y.scaled(c), y, f, 4);
    REQUIRE(rep.c_star.has_value());
    CHECK(*rep.c_star == doctest::Approx(std::max(c, 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("Euclidean c_star is invariant under a rotation of the ambient space") {
  const double a = 0.7;
  const double q[2][2] = {{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}};
  auto rotate = [&](const std::vector<double>& v) {
    return std::vector<double>{q[0][0] * v[0] + q[0][1] * v[1], q[1][0] * v[0] + q[1][1] * v[1]};
  };
  const auto x = random_system(4, 2, 4, NormTag::Euclidean);
  const auto y = random_system(4, 2, 5, NormTag::Euclidean);
  std::vector<std::vector<double>> rx, ry, rf, f0;
  for (const auto& v : x.vectors()) rx.push_back(rotate(v));
  for (const auto& v : y.vectors()) ry.push_back(rotate(v));
  const auto f = sample_functionals(2, NormTag::Euclidean, 16, Seed{4});
  for (std::size_t k = 0; k < f.size(); ++k) {
    f0.emplace_back(f[k].begin(), f[k].end());
    rf.push_back(rotate(f0.back()));
  }
  const auto base = check_ole6(x, y, f, 4);
  const auto rot = check_ole6(VectorSystem(rx, NormTag::Euclidean), VectorSystem(ry, NormTag::Euclidean),
                              FunctionalSample(rf, NormTag::Euclidean, Seed{4}), 4);
  REQUIRE(base.c_star.has_value());
  REQUIRE(rot.c_star.has_value());
  CHECK(*rot.c_star == doctest::Approx(*base.c_star).epsilon(1e-5));
}

TEST_CASE("strong moments") {
  for (auto tag : {NormTag::Sup, NormTag::Euclidean}) {
    const auto x = random_system(7, 3, 6, tag);
    CHECK(strong_moment(x, 100, Seed{}).value == doctest::Approx(oracle_strong(x)).epsilon(1e-12));
    const auto r = strong_moment_ratio(x.scaled(2.0), x, 100, Seed{});
    CHECK(r.ratio == doctest::Approx(2.0).epsilon(1e-12));
    const auto mc = strong_moment(x, 20000, Seed{6}, 4);
    CHECK(std::abs(mc.value - oracle_strong(x)) <= 4 * mc.std_error);
  }
}

TEST_CASE("shape mismatches are rejected") {
  const auto x = random_system(3, 2, 1, NormTag::Sup);
  const auto y = random_system(4, 2, 1, NormTag::Sup);
  const auto z = random_system(3, 2, 1, NormTag::Euclidean);
  const auto f = sample_functionals(2, NormTag::Sup, 0, Seed{});
  CHECK_THROWS_AS(weak_moment_constant(x, y, f, 2), ValidationError);
  CHECK_THROWS_AS(weak_moment_constant(x, z, f, 2), ValidationError);
}

}
