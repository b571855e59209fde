#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "canonproc/contraction.hpp"
#include "canonproc/core.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/reports.hpp"

namespace canonproc {

enum class NormTag { Sup, Euclidean };

std::string_view to_string(NormTag tag);
NormTag parse_norm_tag(std::string_view text);

/// Vectors x_1..x_n of R^m (the terms of a Rademacher series) and the norm
/// of the ambient space.
class VectorSystem {
 public:
  VectorSystem(std::vector<std::vector<double>> vectors, NormTag norm);

  std::size_t terms() const noexcept { return vectors_.size(); }
  std::size_t ambient_dim() const noexcept { return vectors_.front().size(); }
  NormTag norm() const noexcept { return norm_; }
  std::span<const double> vector(std::size_t i) const { return vectors_[i]; }
  const std::vector<std::vector<double>>& vectors() const noexcept { return vectors_; }

  /// Norm of an ambient vector.
  double norm_of(std::span<const double> v) const;
  /// (x*(x_i))_i for a functional x*.
  std::vector<double> coefficients(std::span<const double> functional) const;

  VectorSystem scaled(double c) const;

 private:
  std::vector<std::vector<double>> vectors_;
  NormTag norm_;
};

/// {"norm": "sup" | "euclidean", "vectors": [[...], ...]}
VectorSystem parse_system(std::string_view text);
std::string format_system(const VectorSystem& system);
VectorSystem load_system(const std::filesystem::path& path);
void save_system(const VectorSystem& system, const std::filesystem::path& path);

/// Functionals in the unit ball of the dual norm (l1 for sup, l2 for
/// euclidean).
class FunctionalSample {
 public:
  /// Throws ValidationError if any functional has dual norm > 1 + 1e-12.
  FunctionalSample(std::vector<std::vector<double>> functionals, NormTag norm,
                   Seed seed);

  std::size_t size() const noexcept { return functionals_.size(); }
  std::span<const double> operator[](std::size_t i) const { return functionals_[i]; }
  NormTag norm() const noexcept { return norm_; }
  Seed seed() const noexcept { return seed_; }

 private:
  std::vector<std::vector<double>> functionals_;
  NormTag norm_;
  Seed seed_;
};

/// Sup norm: the 2m extreme points +-e_j, then `random` signed convex
/// combinations. Euclidean: `random` uniform points of the unit sphere.
FunctionalSample sample_functionals(std::size_t ambient_dim, NormTag norm,
                                    std::size_t random, Seed seed);

struct WeakMomentReport {
  double value = 1.0;  // +inf when a numerator meets a zero denominator
  std::size_t functional = 0;
  std::size_t p = 1;
  std::size_t evaluated = 0;  // (functional, p) pairs with a nonzero side
};

/// max over sampled x* and p in [1, p_max] of
/// ||sum x*(x_i) eps_i||_p / ||sum x*(y_i) eps_i||_p. Pairs where both sides
/// vanish are skipped; if every pair is skipped the constant is 1.
WeakMomentReport weak_moment_constant(const VectorSystem& x,
                                      const VectorSystem& y,
                                      const FunctionalSample& funcs,
                                      std::size_t p_max,
                                      std::size_t d_max = kDefaultDMax);

/// Fits the least C with trim(a, floor(C p)) <= C^2 trim(b, p) for every
/// sampled functional, where a = x*(x_i) and b = x*(y_i). worst.first is
/// the index of the binding functional.
ContractionReport check_ole6(const VectorSystem& x, const VectorSystem& y,
                             const FunctionalSample& funcs, std::size_t p_max,
                             double tol = kDefaultTolerance);

/// E||sum eps_i x_i|| against E||sum eps_i y_i||, exact for n <= d_max.
ComparisonReport strong_moment_ratio(const VectorSystem& x,
                                     const VectorSystem& y, std::size_t samples,
                                     Seed seed,
                                     std::size_t d_max = kDefaultDMax);

/// E||sum eps_i x_i|| alone (value, standard error).
Quantity strong_moment(const VectorSystem& x, std::size_t samples, Seed seed,
                       std::size_t d_max = kDefaultDMax);

}  // namespace canonproc
