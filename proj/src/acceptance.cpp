#include "canonproc/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "canonproc/chaining.hpp"
#include "canonproc/contraction.hpp"
#include "canonproc/core.hpp"
#include "canonproc/decomposition.hpp"
#include "canonproc/errors.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/rng.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc {

namespace {

// Rounding slack for inequalities that can hold with equality.
constexpr double kRoundingSlack = 1e-12;

bool leq(double a, double b) { return a <= b + kRoundingSlack * std::max(1.0, std::abs(b)); }

const double kSqrt3 = std::sqrt(3.0);

// Fifty points of dimension 12, ten from each of five coordinate laws.
std::vector<Point> moment_corpus(std::uint64_t seed) {
  std::vector<Point> out;
  const std::size_t d = 12;
  for (std::size_t i = 0; i < 50; ++i) {
    const CounterStream rng(seed, "corpus/moments", i);
    std::vector<double> v(d);
    const std::size_t law = i % 5;
    for (std::size_t j = 0; j < d; ++j) {
      const double g = rng.normal(j);
      switch (law) {
        case 0: v[j] = g; break;                                    // gaussian
        case 1: v[j] = rng.uniform(100 + j) < 0.7 ? 0.0 : g; break;  // sparse
        case 2: v[j] = rng.sign(200 + j); break;                     // flat
        case 3: v[j] = g * std::ldexp(1.0, -int(j)); break;          // geometric
        default: v[j] = g / rng.uniform(300 + j); break;             // heavy
      }
    }
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
    out.emplace_back(std::move(v));
  }
  return out;
}

CriterionResult moment_sandwich(const SuiteOptions& o) {
  CriterionResult r{1, "moment sandwich exact <= proxy <= 4 exact", true, "", Json::object()};
  const auto corpus = moment_corpus(o.seed);
  std::size_t checks = 0, violations = 0;
  double worst_lower = 0.0, worst_upper = 0.0;  // max proxy/exact and exact/proxy*4
  for (const auto& t : corpus) {
    for (std::size_t p : {1, 2, 3, 4, 8, 16}) {
      const double exact = bernoulli_norm_exact(t, double(p));
      const double proxy = bernoulli_norm_proxy(t, p).proxy;
      ++checks;
      if (!leq(exact, proxy) || !leq(proxy, 4.0 * exact)) ++violations;
      worst_upper = std::max(worst_upper, proxy / exact);
      worst_lower = std::max(worst_lower, exact / proxy);
    }
  }
  r.passed = violations == 0;
  r.data = {{"checks", checks},
            {"violations", violations},
            {"max_proxy_over_exact", number(worst_upper)},
            {"max_exact_over_proxy", number(worst_lower)}};
  r.summary = std::to_string(checks) + " checks, " + std::to_string(violations) +
              " violations, max proxy/exact " + std::to_string(worst_upper);
  return r;
}

CriterionResult moment_regularity(const SuiteOptions& o) {
  CriterionResult r{2, "moment regularity ||X||_{2q} <= sqrt(3) ||X||_q", true, "", Json::object()};
  const auto corpus = moment_corpus(o.seed);
  std::size_t checks = 0, violations = 0;
  double worst = 0.0;
  for (const auto& t : corpus) {
    for (double q : {2.0, 4.0, 8.0}) {
      const double ratio = bernoulli_norm_exact(t, 2 * q) / bernoulli_norm_exact(t, q);
      ++checks;
      if (!leq(ratio, kSqrt3)) ++violations;
      worst = std::max(worst, ratio);
    }
  }
  double worst_gauss = 0.0;
  for (double q : {2.0, 4.0, 8.0, 16.0}) {
    const double ratio = gaussian_moment_constant(2 * q) / gaussian_moment_constant(q);
    ++checks;
    if (!(ratio <= kSqrt3)) ++violations;
    worst_gauss = std::max(worst_gauss, ratio);
  }
  r.passed = violations == 0;
  r.data = {{"checks", checks},
            {"violations", violations},
            {"max_bernoulli_ratio", number(worst)},
            {"max_gaussian_ratio", number(worst_gauss)}};
  r.summary = std::to_string(checks) + " checks, max ratios " + std::to_string(worst) +
              " (Bernoulli), " + std::to_string(worst_gauss) + " (Gaussian)";
  return r;
}

std::vector<FiniteSet> chain_bound_corpus(std::uint64_t seed) {
  std::vector<FiniteSet> sets;
  for (std::uint64_t k = 0; k < 20; ++k) {
    sets.push_back(generate_set(SetKind::RandomSphere, 12, 32, Seed{seed + k}));
  }
  sets.push_back(generate_set(SetKind::SimplexVertices, 12, 12, Seed{seed}));
  sets.push_back(generate_set(SetKind::CubeVertices, 5, 32, Seed{seed}));
  sets.push_back(generate_set(SetKind::CubeVertices, 12, 32, Seed{seed}));
  const double block = 3;
  sets.push_back(generate_set(SetKind::DisjointBlocks, 12, 4, Seed{seed}, {&block, 1}));
  sets.push_back(generate_set(SetKind::EllipsoidSample, 12, 32, Seed{seed}));
  return sets;
}

CriterionResult four_gamma(const SuiteOptions& o) {
  CriterionResult r{3, "S_X(F) <= 4 * greedy chain bound", true, "", Json::object()};
  std::size_t violations = 0;
  double worst_b = 0.0, worst_g = 0.0;
  Json rows = Json::array();
  for (const auto& set : chain_bound_corpus(o.seed)) {
    const auto b = verify_theorem2(set, ProcessKind::Bernoulli, 100000, Seed{o.seed});
    const auto g = verify_theorem2(set, ProcessKind::Gaussian, 100000, Seed{o.seed});
    violations += b.violation + g.violation;
    worst_b = std::max(worst_b, b.ratio);
    worst_g = std::max(worst_g, g.ratio);
    rows.push_back({{"set", set_reference(set)},
                    {"bernoulli_ratio", number(b.ratio)},
                    {"gaussian_ratio", number(g.ratio)},
                    {"gaussian_stderr", number(g.numerator.std_error)}});
  }
  r.passed = violations == 0;
  r.data = {{"sets", rows.size()},
            {"violations", violations},
            {"max_bernoulli_ratio", number(worst_b)},
            {"max_gaussian_ratio", number(worst_g)},
            {"rows", rows}};
  r.summary = std::to_string(rows.size()) + " sets, " + std::to_string(violations) +
              " violations, max S/bound " + std::to_string(worst_b) + " (B), " +
              std::to_string(worst_g) + " (G)";
  return r;
}

CriterionResult exhaustive(const SuiteOptions& o) {
  CriterionResult r{4, "exhaustive gamma <= greedy bound; two-point gamma = ||t-s||", true, "",
                    Json::object()};
  std::size_t violations = 0, two_point = 0;
  double worst_rel = 0.0;
  const SetKind kinds[] = {SetKind::RandomSphere, SetKind::EllipsoidSample, SetKind::CubeVertices};
  const MomentModel models[] = {MomentModel::gaussian_exact(), MomentModel::bernoulli_exact(),
                                MomentModel::bernoulli_proxy()};
  for (std::uint64_t k = 0; k < 30; ++k) {
    const std::size_t size = 1 + k % 4;
    const std::size_t dim = 2 + k % 5;
    const FiniteSet set = generate_set(kinds[k % 3], dim, size, Seed{o.seed + k});
    for (const auto& model : models) {
      const double best = exhaustive_gamma(set, model).value;
      const double greedy = chain_bound(set, build_partition_greedy(set), model).value;
      if (!leq(best, greedy)) ++violations;
    }
    if (size == 2) {
      ++two_point;
      const double g = exhaustive_gamma(set, MomentModel::gaussian_exact()).value;
      const double expect = (set[1] - set[0]).norm2();
      const double rel = std::abs(g - expect) / expect;
      worst_rel = std::max(worst_rel, rel);
      if (!(rel <= 1e-12)) ++violations;
    }
  }
  r.passed = violations == 0;
  r.data = {{"instances", 30},
            {"two_point_sets", two_point},
            {"violations", violations},
            {"max_two_point_rel_error", number(worst_rel)}};
  r.summary = "30 instances x 3 models, " + std::to_string(two_point) + " two-point sets, " +
              std::to_string(violations) + " violations";
  return r;
}

CriterionResult combiner(const SuiteOptions& o) {
  CriterionResult r{5, "sum-set tree bound <= sqrt(3) (bound A + bound B)", true, "",
                    Json::object()};
  std::size_t violations = 0;
  double worst = 0.0;
  const auto model = MomentModel::gaussian_exact();
  for (std::uint64_t k = 0; k < 10; ++k) {
    const CounterStream rng(o.seed, "corpus/combiner", k);
    const std::size_t na = 2 + std::size_t(rng.uniform(0) * 7);
    const std::size_t nb = 2 + std::size_t(rng.uniform(1) * 7);
    const FiniteSet a = generate_set(SetKind::RandomSphere, 8, na, Seed{o.seed + 2 * k});
    const FiniteSet b = generate_set(SetKind::EllipsoidSample, 8, nb, Seed{o.seed + 2 * k + 1});
    const auto ta = build_partition_greedy(a);
    const auto tb = build_partition_greedy(b);
    const double ba = chain_bound(a, ta, model).value;
    const double bb = chain_bound(b, tb, model).value;
    const auto sum = combine_sum_set(a, ta, b, tb);
    const double bs = chain_bound(sum.set, sum.tree, model).value;
    const double ratio = bs / (ba + bb);
    worst = std::max(worst, ratio);
    if (!leq(bs, kSqrt3 * (ba + bb))) ++violations;
  }
  r.passed = violations == 0;
  r.data = {{"pairs", 10}, {"violations", violations}, {"max_ratio", number(worst)}};
  r.summary = "10 pairs, max combined/(A+B) " + std::to_string(worst) + " vs sqrt(3)";
  return r;
}

CriterionResult contraction_principle(const SuiteOptions& o) {
  CriterionResult r{6, "coordinate contractions: S_B(phi(T)) <= S_B(T), condition at C=1", true,
                    "", Json::object()};
  const CoordinateMap maps[] = {CoordinateMap::abs(), CoordinateMap::clamp(-1.0, 1.0),
                                CoordinateMap::soft_threshold(0.5)};
  std::size_t violations = 0, condition_failures = 0;
  double worst = 0.0;
  const double radius = 3.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const FiniteSet set =
        generate_set(SetKind::RandomSphere, 10, 16, Seed{o.seed + k}, {&radius, 1});
    const double s_source = brute_force_bernoulli_sup(set).value;
    for (const auto& map : maps) {
      const MappedPair pair = apply_coordinate_map(set, map);
      const double s_image = brute_force_bernoulli_sup(distinct_points(pair.image())).value;
      if (!(s_image <= s_source + 1e-12 * std::max(1.0, s_source))) ++violations;
      worst = std::max(worst, s_image / s_source);
      if (!check_condition(pair, 1.0, set.dim()).holds) ++condition_failures;
    }
  }
  r.passed = violations == 0 && condition_failures == 0;
  r.data = {{"instances", 60},
            {"sup_violations", violations},
            {"condition_failures", condition_failures},
            {"max_ratio", number(worst)}};
  r.summary = "60 instances, " + std::to_string(violations) + " sup violations, " +
              std::to_string(condition_failures) + " condition failures, max ratio " +
              std::to_string(worst);
  return r;
}

CriterionResult fit_calibration(const SuiteOptions& o) {
  CriterionResult r{7, "fit_min_C calibration and monotone feasibility", true, "",
                    Json::object()};
  const FiniteSet set = generate_set(SetKind::RandomSphere, 8, 10, Seed{o.seed});
  Json fits = Json::array();
  std::size_t failures = 0;
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    const auto rep = fit_min_C(apply_coordinate_map(set, CoordinateMap::scale(c)), set.dim());
    const double expect = std::max(std::abs(c), 1.0);
    const bool ok = rep.c_star && std::abs(*rep.c_star - expect) <= 1e-4;
    failures += !ok;
    fits.push_back({{"c", c}, {"c_star", rep.c_star ? number(*rep.c_star) : Json("infeasible")},
                    {"ok", ok}});
  }
  // Random mapped pairs: perturbed linear images of random sets.
  std::vector<std::vector<IncrementPair>> pool;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const FiniteSet src = generate_set(SetKind::RandomSphere, 6, 8, Seed{o.seed + 100 + k});
    const CounterStream rng(o.seed, "corpus/probe-map", k);
    std::vector<Point> image;
    for (std::size_t i = 0; i < src.size(); ++i) {
      std::vector<double> v(src.dim());
      for (std::size_t j = 0; j < src.dim(); ++j) {
        const double gain = 0.5 + 2.5 * rng.uniform(j);
        v[j] = gain * src[i][j] + 0.3 * rng.normal(64 + i * src.dim() + j);
      }
      image.emplace_back(std::move(v));
    }
    pool.push_back(pair_increments(MappedPair(src, std::move(image))));
  }
  std::size_t monotone_failures = 0, feasible_low = 0;
  for (std::uint64_t probe = 0; probe < 100; ++probe) {
    const CounterStream rng(o.seed, "corpus/probe", probe);
    const auto& inc = pool[probe % pool.size()];
    const double c1 = 1.0 + 7.0 * rng.uniform(0);
    const double c2 = c1 + (8.0 - c1) * rng.uniform(1);
    const bool f1 = check_increments(inc, c1, 6).holds;
    const bool f2 = check_increments(inc, c2, 6).holds;
    feasible_low += f1;
    if (f1 && !f2) ++monotone_failures;
  }
  r.passed = failures == 0 && monotone_failures == 0;
  r.data = {{"fits", fits},
            {"probes", 100},
            {"feasible_at_lower_c", feasible_low},
            {"monotonicity_failures", monotone_failures}};
  r.summary = std::to_string(4 - failures) + "/4 calibrations, " +
              std::to_string(monotone_failures) + " monotonicity failures in 100 probes (" +
              std::to_string(feasible_low) + " feasible at the lower C)";
  return r;
}

CriterionResult decomposition(const SuiteOptions& o) {
  CriterionResult r{8, "threshold decomposition structure on disjoint blocks", true, "",
                    Json::object()};
  std::size_t failures = 0;
  Json rows = Json::array();
  const double block = 8;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const FiniteSet set = generate_set(SetKind::DisjointBlocks, 64, 8, Seed{o.seed + k}, {&block, 1});
    DecompositionOptions opts;
    opts.samples = 20000;
    opts.seed = Seed{o.seed + k};
    const auto res = decompose_by_sweep(set, opts);
    bool ok = true;
    for (const auto& g : res.grid) {
      std::vector<Point> heads, tails;
      for (const auto& t : set.points()) {
        auto [head, tail] = threshold_split(t, g.threshold);
        for (std::size_t j = 0; j < t.dim(); ++j) ok &= head[j] + tail[j] == t[j];
        heads.push_back(std::move(head));
        tails.push_back(std::move(tail));
      }
      ok &= has_disjoint_supports(heads) && has_disjoint_supports(tails);
      ok &= res.objective <= g.objective;
    }
    const auto two = verify_two_sided(set, res);
    ok &= std::isfinite(res.k_emp) && res.k_emp > 0.0;
    ok &= std::isfinite(two.lower.ratio) && two.lower.ratio > 0.0;
    failures += !ok;
    rows.push_back({{"seed", o.seed + k},
                    {"threshold", number(res.split.thresholds.front())},
                    {"objective", number(res.objective)},
                    {"s_b", number(res.s_b_reference.value)},
                    {"k_emp", number(res.k_emp)},
                    {"lower_ratio", number(two.lower.ratio)},
                    {"ok", ok}});
  }
  r.passed = failures == 0;
  double k_min = 1e300, k_max = 0.0;
  for (const auto& row : rows) {
    k_min = std::min(k_min, row["k_emp"].get<double>());
    k_max = std::max(k_max, row["k_emp"].get<double>());
  }
  r.data = {{"instances", 20}, {"failures", failures}, {"k_emp_min", number(k_min)},
            {"k_emp_max", number(k_max)}, {"rows", rows}};
  r.summary = "20 corpora, " + std::to_string(failures) + " structural failures, k_emp in [" +
              std::to_string(k_min) + ", " + std::to_string(k_max) + "]";
  return r;
}

CriterionResult monte_carlo(const SuiteOptions& o) {
  CriterionResult r{9, "Monte Carlo agrees with exact formulas", true, "", Json::object()};
  std::size_t norm_checks = 0, norm_failures = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const FiniteSet one = generate_set(SetKind::EllipsoidSample, 8, 1, Seed{o.seed + k});
    const Point& t = one[0];
    for (double p : {1.0, 2.0, 4.0}) {
      const auto mc = mc_norm(ProcessKind::Gaussian, t, p, 100000, Seed{o.seed + k});
      ++norm_checks;
      if (!(std::abs(mc.estimate - gaussian_norm_exact(t, p)) <= 3.0 * mc.std_error)) {
        ++norm_failures;
      }
    }
  }
  std::size_t agree = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const FiniteSet set = generate_set(SetKind::RandomSphere, 10, 12, Seed{o.seed + 1000 + k});
    const double exact = brute_force_bernoulli_sup(set).value;
    const auto mc = mc_sup(ProcessKind::Bernoulli, set, 10000, Seed{o.seed + k});
    agree += std::abs(mc.value - exact) <= 3.0 * mc.std_error;
  }
  r.passed = norm_failures == 0 && agree >= 99;
  r.data = {{"gaussian_norm_checks", norm_checks},
            {"gaussian_norm_failures", norm_failures},
            {"sup_trials", 100},
            {"sup_agreements", agree}};
  r.summary = std::to_string(norm_checks - norm_failures) + "/" + std::to_string(norm_checks) +
              " Gaussian norms within 3 stderr, " + std::to_string(agree) +
              "/100 suprema within 3 stderr";
  return r;
}

Json suite_body(const std::vector<CriterionResult>& results) {
  Json rows = Json::array();
  for (const auto& c : results) {
    rows.push_back({{"id", c.id},
                    {"name", c.name},
                    {"passed", c.passed},
                    {"summary", c.summary},
                    {"data", c.data}});
  }
  return rows;
}

CriterionResult determinism(const SuiteOptions& o) {
  CriterionResult r{10, "suite reports are byte-identical across runs", true, "", Json::object()};
  SuiteOptions inner = o;
  inner.only.clear();
  for (int id = 1; id < kCriterionCount; ++id) inner.only.push_back(id);
  const std::string first = run_suite(inner).report(inner).dump();
  const std::string second = run_suite(inner).report(inner).dump();
  r.passed = first == second;
  r.data = {{"bytes", first.size()}, {"identical", r.passed}};
  r.summary = std::to_string(first.size()) + " bytes, " + (r.passed ? "identical" : "DIFFERENT");
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  switch (id) {
    case 1: return moment_sandwich(options);
    case 2: return moment_regularity(options);
    case 3: return four_gamma(options);
    case 4: return exhaustive(options);
    case 5: return combiner(options);
    case 6: return contraction_principle(options);
    case 7: return fit_calibration(options);
    case 8: return decomposition(options);
    case 9: return monte_carlo(options);
    case 10: return determinism(options);
    default: throw ParameterError("criterion", "no criterion " + std::to_string(id));
  }
}

bool SuiteRun::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed; });
}

Json SuiteRun::report(const SuiteOptions& options) const {
  Json only = options.only;
  return make_report("suite", {{"seed", options.seed}, {"criteria", only}}, Json::array(),
                     {{"passed", all_passed()}, {"criteria", suite_body(criteria)}});
}

SuiteRun run_suite(const SuiteOptions& options,
                   const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> ids = options.only;
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }
  SuiteRun run;
  for (int id : ids) {
    run.criteria.push_back(run_criterion(id, options));
    if (on_result) on_result(run.criteria.back());
  }
  return run;
}

}  // namespace canonproc
