#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace canonproc {

/// A finite real vector standing in for an element of l2.
///
/// Invariants: at least one coordinate, every coordinate finite.
class Point {
 public:
  explicit Point(std::vector<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Zero vector of dimension `dim`.
  static Point zero(std::size_t dim);

  Point operator-(const Point& other) const;
  Point operator+(const Point& other) const;
  Point scaled(double c) const;

  bool is_zero() const noexcept;
  double norm1() const noexcept;
  double norm2() const noexcept;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

enum class ProcessKind { Bernoulli, Gaussian };

std::string_view to_string(ProcessKind kind);
ProcessKind parse_process_kind(std::string_view text);

/// Seed of a counter-based random stream.
struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// A named, nonempty collection of distinct points of one dimension.
class FiniteSet {
 public:
  /// Throws ValidationError on empty input, mixed dimensions or duplicates.
  FiniteSet(std::string name, std::vector<Point> points);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::span<const Point> points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  bool contains(const Point& p) const;
  FiniteSet scaled(double c, std::string name) const;

  /// Hex FNV-1a digest over dim and the IEEE bit patterns of every coordinate.
  std::string content_hash() const;

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::vector<Point> points_;
};

/// Distinct points of `points` in first-occurrence order.
std::vector<Point> distinct_points(std::span<const Point> points);

enum class SetKind {
  RandomSphere,
  SimplexVertices,
  EllipsoidSample,
  CubeVertices,
  DisjointBlocks
};

std::string_view to_string(SetKind kind);
SetKind parse_set_kind(std::string_view text);

/// Deterministic test-set generator.
///
/// `params` by kind:
///  - RandomSphere: optional radius (default 1).
///  - EllipsoidSample: semi-axes; missing axes default to 1/(i+1).
///  - DisjointBlocks: block length b (required), b*count <= dim.
///  - SimplexVertices, CubeVertices: unused.
FiniteSet generate_set(SetKind kind, std::size_t dim, std::size_t count,
                       Seed seed, std::span<const double> params = {});

/// Translate so the first point becomes the origin.
FiniteSet center_at_zero(const FiniteSet& set);

/// Set file: {"name": ..., "dim": d, "points": [[...], ...]}.
FiniteSet parse_set(std::string_view text);
std::string format_set(const FiniteSet& set);
FiniteSet load_set(const std::filesystem::path& path);
void save_set(const FiniteSet& set, const std::filesystem::path& path);

}  // namespace canonproc
