#pragma once

#include <optional>
#include <span>

#include "canonproc/core.hpp"
#include "canonproc/moments.hpp"

namespace canonproc {

enum class SupMethod { Exact, MonteCarlo };

std::string_view to_string(SupMethod method);

/// Estimate of E sup_{t in F} X_t. std_error is 0 exactly when the method is
/// Exact.
struct SupEstimate {
  double value = 0.0;
  double std_error = 0.0;
  SupMethod method = SupMethod::Exact;
  std::size_t samples = 0;
  std::optional<Seed> seed;
};

/// Exact 2^{-d} sum_eps max_{t in F} <eps, t>. Throws CapacityError when
/// dim > d_max.
SupEstimate brute_force_bernoulli_sup(std::span<const Point> points,
                                      std::size_t d_max = kDefaultDMax);
SupEstimate brute_force_bernoulli_sup(const FiniteSet& set,
                                      std::size_t d_max = kDefaultDMax);

/// Sample mean of max_{t in F} <xi, t> over independent Rademacher or
/// standard normal vectors xi. Requires samples >= 2.
SupEstimate mc_sup(ProcessKind kind, std::span<const Point> points,
                   std::size_t samples, Seed seed);
SupEstimate mc_sup(ProcessKind kind, const FiniteSet& set, std::size_t samples,
                   Seed seed);

/// Bernoulli supremum, exact when dim <= d_max and Monte Carlo otherwise.
SupEstimate bernoulli_sup(std::span<const Point> points, std::size_t samples,
                          Seed seed, std::size_t d_max = kDefaultDMax);

}  // namespace canonproc
