#include "canonproc/suprema.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "canonproc/errors.hpp"
#include "canonproc/rng.hpp"
#include "summation.hpp"

namespace canonproc {

namespace {

std::size_t common_dim(std::span<const Point> points) {
  if (points.empty()) throw ValidationError("supremum over an empty set");
  const std::size_t d = points.front().dim();
  for (const auto& p : points) {
    if (p.dim() != d) throw ValidationError("points differ in dimension");
  }
  return d;
}

}  // namespace

std::string_view to_string(SupMethod method) {
  return method == SupMethod::Exact ? "exact" : "monte_carlo";
}

SupEstimate brute_force_bernoulli_sup(std::span<const Point> points,
                                      std::size_t d_max) {
  const std::size_t d = common_dim(points);
  if (d > d_max) {
    throw CapacityError("exact Bernoulli supremum needs dim <= " +
                        std::to_string(d_max) + " (got " + std::to_string(d) +
                        ")");
  }
  // <eps, t> for every t, split into low and high coordinate halves.
  const std::size_t lo_dim = d / 2;
  std::vector<std::vector<double>> lo, hi;
  lo.reserve(points.size());
  hi.reserve(points.size());
  for (const auto& p : points) {
    lo.push_back(rademacher_sums(p.coords().first(lo_dim), d_max));
    hi.push_back(rademacher_sums(p.coords().subspan(lo_dim), d_max));
  }
  const std::size_t n_lo = lo.front().size();
  const std::size_t n_hi = hi.front().size();
  detail::NeumaierSum acc;
  for (std::size_t h = 0; h < n_hi; ++h) {
    for (std::size_t l = 0; l < n_lo; ++l) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < points.size(); ++k) {
        best = std::max(best, lo[k][l] + hi[k][h]);
      }
      acc.add(best);
    }
  }
  SupEstimate out;
  out.value = acc.value() / static_cast<double>(n_lo * n_hi);
  out.method = SupMethod::Exact;
  return out;
}

SupEstimate brute_force_bernoulli_sup(const FiniteSet& set, std::size_t d_max) {
  return brute_force_bernoulli_sup(set.points(), d_max);
}

SupEstimate mc_sup(ProcessKind kind, std::span<const Point> points,
                   std::size_t samples, Seed seed) {
  if (samples < 2) throw ParameterError("samples", "must be >= 2");
  const std::size_t d = common_dim(points);
  const std::string label = "mc_sup/" + std::string(to_string(kind));
  std::vector<double> xi(d);
  detail::Welford stats;
  for (std::size_t i = 0; i < samples; ++i) {
    const CounterStream rng(seed.value, label, i);
    for (std::size_t j = 0; j < d; ++j) {
      xi[j] = kind == ProcessKind::Bernoulli ? rng.sign(j) : rng.normal(j);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += p[j] * xi[j];
      best = std::max(best, s);
    }
    stats.add(best);
  }
  SupEstimate out;
  out.value = stats.mean();
  out.std_error = stats.std_error();
  out.method = SupMethod::MonteCarlo;
  out.samples = samples;
  out.seed = seed;
  return out;
}

SupEstimate mc_sup(ProcessKind kind, const FiniteSet& set, std::size_t samples,
                   Seed seed) {
  return mc_sup(kind, set.points(), samples, seed);
}

SupEstimate bernoulli_sup(std::span<const Point> points, std::size_t samples,
                          Seed seed, std::size_t d_max) {
  if (common_dim(points) <= d_max) {
    return brute_force_bernoulli_sup(points, d_max);
  }
  return mc_sup(ProcessKind::Bernoulli, points, samples, seed);
}

}  // namespace canonproc
