#include "canonproc/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "canonproc/errors.hpp"
#include "canonproc/rng.hpp"
#include "summation.hpp"

namespace canonproc {

namespace {

std::vector<double> abs_coords(std::span<const double> t) {
  std::vector<double> a(t.size());
  std::transform(t.begin(), t.end(), a.begin(),
                 [](double x) { return std::abs(x); });
  return a;
}

// Sums over sign patterns of one half of the coordinates.
std::vector<double> half_sums(std::span<const double> t) {
  const std::size_t n = std::size_t{1} << t.size();
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      s += (m >> j) & 1U ? -t[j] : t[j];
    }
    out[m] = s;
  }
  return out;
}

void check_capacity(std::size_t dim, std::size_t d_max) {
  if (dim > d_max) {
    throw CapacityError("exact enumeration needs dim <= " +
                        std::to_string(d_max) + " (got " +
                        std::to_string(dim) +
                        "); use the Monte Carlo model instead");
  }
}

}  // namespace

Point rearrange(const Point& t) {
  auto a = abs_coords(t.coords());
  std::stable_sort(a.begin(), a.end(), std::greater<>());
  return Point(std::move(a));
}

double ell1_part(const Point& t, std::size_t p) {
  auto a = abs_coords(t.coords());
  const std::size_t k = std::min(p, a.size());
  if (k < a.size()) {
    std::nth_element(a.begin(), a.begin() + k, a.end(), std::greater<>());
  }
  return std::accumulate(a.begin(), a.begin() + k, 0.0);
}

double tail_sq(std::span<const double> t, std::size_t p) {
  const std::size_t k = std::min(p, t.size());
  const std::size_t keep = t.size() - k;
  if (keep == 0) return 0.0;
  std::vector<double> sq(t.size());
  std::transform(t.begin(), t.end(), sq.begin(),
                 [](double x) { return x * x; });
  if (keep < sq.size()) std::nth_element(sq.begin(), sq.begin() + keep, sq.end());
  return std::accumulate(sq.begin(), sq.begin() + keep, 0.0);
}

double tail_l2(const Point& t, std::size_t p) {
  return std::sqrt(tail_sq(t.coords(), p));
}

MomentDecomposition bernoulli_norm_proxy(const Point& t, std::size_t p) {
  if (p == 0) throw ParameterError("p", "the decomposition needs p >= 1");
  MomentDecomposition d;
  d.p = p;
  d.ell1_part = ell1_part(t, p);
  d.tail_l2 = tail_l2(t, p);
  d.proxy = d.ell1_part + std::sqrt(static_cast<double>(p)) * d.tail_l2;
  return d;
}

double gaussian_moment_constant(double p) {
  if (!(p > 0.0)) throw ParameterError("p", "must be positive");
  const double log_abs_moment =
      std::lgamma((p + 1.0) / 2.0) - 0.5 * std::log(std::numbers::pi) +
      0.5 * p * std::log(2.0);
  return std::exp(log_abs_moment / p);
}

double gaussian_norm_exact(const Point& t, double p) {
  if (!(p >= 1.0)) throw ParameterError("p", "must be >= 1");
  return t.norm2() * gaussian_moment_constant(p);
}

std::vector<double> rademacher_sums(std::span<const double> t,
                                    std::size_t d_max) {
  check_capacity(t.size(), d_max);
  const std::size_t lo_dim = t.size() / 2;
  const auto lo = half_sums(t.first(lo_dim));
  const auto hi = half_sums(t.subspan(lo_dim));
  std::vector<double> out;
  out.reserve(lo.size() * hi.size());
  for (double h : hi) {
    for (double l : lo) out.push_back(l + h);
  }
  return out;
}

double bernoulli_norm_exact(const Point& t, double p, std::size_t d_max) {
  if (!(p >= 1.0)) throw ParameterError("p", "must be >= 1");
  check_capacity(t.dim(), d_max);
  if (t.is_zero()) return 0.0;
  const std::size_t lo_dim = t.dim() / 2;
  const auto lo = half_sums(t.coords().first(lo_dim));
  const auto hi = half_sums(t.coords().subspan(lo_dim));
  detail::NeumaierSum acc;
  for (double h : hi) {
    for (double l : lo) acc.add(std::pow(std::abs(l + h), p));
  }
  const double mean = acc.value() / static_cast<double>(lo.size() * hi.size());
  return std::pow(mean, 1.0 / p);
}

McEstimate mc_norm(ProcessKind kind, const Point& t, double p,
                   std::size_t samples, Seed seed) {
  if (samples < 2) throw ParameterError("samples", "must be >= 2");
  if (!(p >= 1.0)) throw ParameterError("p", "must be >= 1");
  const std::string label = "mc_norm/" + std::string(to_string(kind));
  detail::Welford stats;
  for (std::size_t i = 0; i < samples; ++i) {
    const CounterStream rng(seed.value, label, i);
    double x = 0.0;
    for (std::size_t j = 0; j < t.dim(); ++j) {
      const double xi =
          kind == ProcessKind::Bernoulli ? rng.sign(j) : rng.normal(j);
      x += t[j] * xi;
    }
    stats.add(std::pow(std::abs(x), p));
  }
  McEstimate out;
  const double mean = stats.mean();
  if (mean <= 0.0) return out;
  out.estimate = std::pow(mean, 1.0 / p);
  // d/dm m^{1/p} = m^{1/p - 1} / p
  out.std_error = out.estimate / (p * mean) * stats.std_error();
  return out;
}

MomentModel MomentModel::bernoulli_exact(std::size_t d_max) {
  MomentModel m(MomentKind::BernoulliExact);
  m.d_max_ = d_max;
  return m;
}

MomentModel MomentModel::monte_carlo(ProcessKind process, std::size_t samples,
                                     Seed seed) {
  if (samples < 2) throw ParameterError("samples", "must be >= 2");
  MomentModel m(MomentKind::MonteCarlo);
  m.process_ = process;
  m.samples_ = samples;
  m.seed_ = seed;
  return m;
}

double MomentModel::norm(const Point& t, double p) const {
  if (t.is_zero()) return 0.0;
  switch (kind_) {
    case MomentKind::BernoulliProxy: {
      if (p != std::floor(p) || p < 1.0) {
        throw ParameterError("p", "the proxy is defined for integer p >= 1");
      }
      return bernoulli_norm_proxy(t, static_cast<std::size_t>(p)).proxy;
    }
    case MomentKind::BernoulliExact:
      return bernoulli_norm_exact(t, p, d_max_);
    case MomentKind::GaussianExact:
      return gaussian_norm_exact(t, p);
    case MomentKind::MonteCarlo:
      return mc_norm(process_, t, p, samples_, seed_).estimate;
  }
  return 0.0;
}

std::string_view to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::BernoulliProxy: return "bernoulli_proxy";
    case MomentKind::BernoulliExact: return "bernoulli_exact";
    case MomentKind::GaussianExact: return "gaussian_exact";
    case MomentKind::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

}  // namespace canonproc
