#pragma once

#include <cstddef>
#include <span>

#include "canonproc/core.hpp"

namespace canonproc {

/// Largest dimension handled by exact sign enumeration (2^20 patterns).
inline constexpr std::size_t kDefaultDMax = 20;

/// |t_i| sorted nonincreasing; ties keep their original index order.
Point rearrange(const Point& t);

/// Sum of the min(p, d) largest |t_i|.
double ell1_part(const Point& t, std::size_t p);

/// Squared l2 norm of t with its min(p, d) largest-magnitude coordinates
/// removed. Uses selection rather than a full sort.
double tail_sq(std::span<const double> t, std::size_t p);

/// sqrt(tail_sq(t, p)).
double tail_l2(const Point& t, std::size_t p);

/// Two-part moment estimate: ell1_part + sqrt(p) * tail_l2, which is within a
/// factor 4 of the exact Rademacher p-th moment.
struct MomentDecomposition {
  std::size_t p = 0;
  double ell1_part = 0.0;
  double tail_l2 = 0.0;
  double proxy = 0.0;
};

/// Throws ParameterError for p = 0.
MomentDecomposition bernoulli_norm_proxy(const Point& t, std::size_t p);

/// (E|g|^p)^{1/p} for standard normal g, from the Gamma function. p > 0.
double gaussian_moment_constant(double p);

/// ||G_t||_p = ||t||_2 * gaussian_moment_constant(p).
double gaussian_norm_exact(const Point& t, double p);

/// (2^{-d} sum_eps |<eps, t>|^p)^{1/p} by enumerating every sign pattern.
/// Accepts any real p >= 1. Throws CapacityError when dim > d_max.
double bernoulli_norm_exact(const Point& t, double p,
                            std::size_t d_max = kDefaultDMax);

/// All 2^d values of <eps, t>, in pattern order (bit j of the pattern index
/// set means eps_j = -1). Each value is formed from two half sums so it
/// carries at most one rounding beyond them.
std::vector<double> rademacher_sums(std::span<const double> t,
                                    std::size_t d_max = kDefaultDMax);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo (E|X_t|^p)^{1/p}. The standard error is the delta-method
/// error of the p-th root of the sample mean. Requires samples >= 2.
McEstimate mc_norm(ProcessKind kind, const Point& t, double p,
                   std::size_t samples, Seed seed);

/// Which route evaluates ||X_t||_p.
enum class MomentKind { BernoulliProxy, BernoulliExact, GaussianExact, MonteCarlo };

class MomentModel {
 public:
  static MomentModel bernoulli_proxy() { return MomentModel(MomentKind::BernoulliProxy); }
  static MomentModel bernoulli_exact(std::size_t d_max = kDefaultDMax);
  static MomentModel gaussian_exact() { return MomentModel(MomentKind::GaussianExact); }
  /// Throws ParameterError for samples < 2.
  static MomentModel monte_carlo(ProcessKind process, std::size_t samples,
                                 Seed seed);

  MomentKind kind() const noexcept { return kind_; }
  ProcessKind process() const noexcept { return process_; }
  std::size_t samples() const noexcept { return samples_; }
  Seed seed() const noexcept { return seed_; }
  std::size_t d_max() const noexcept { return d_max_; }

  /// ||X_t||_p under this model. The proxy route needs integer p.
  double norm(const Point& t, double p) const;

  friend bool operator==(const MomentModel&, const MomentModel&) = default;

 private:
  explicit MomentModel(MomentKind kind) : kind_(kind) {}

  MomentKind kind_;
  ProcessKind process_ = ProcessKind::Bernoulli;
  std::size_t samples_ = 0;
  Seed seed_{};
  std::size_t d_max_ = kDefaultDMax;
};

std::string_view to_string(MomentKind kind);

}  // namespace canonproc
