#include "canonproc/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "canonproc/errors.hpp"
#include "canonproc/rng.hpp"

namespace canonproc {

using json = nlohmann::ordered_json;

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("point must have dim >= 1");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw ValidationError("coordinate " + std::to_string(i) +
                            " is not finite");
    }
  }
}

Point Point::zero(std::size_t dim) {
  return Point(std::vector<double>(dim, 0.0));
}

Point Point::operator-(const Point& other) const {
  if (other.dim() != dim()) throw ValidationError("dimension mismatch");
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] - other[i];
  return Point(std::move(out));
}

Point Point::operator+(const Point& other) const {
  if (other.dim() != dim()) throw ValidationError("dimension mismatch");
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] + other[i];
  return Point(std::move(out));
}

Point Point::scaled(double c) const {
  std::vector<double> out(coords_);
  for (double& x : out) x *= c;
  return Point(std::move(out));
}

bool Point::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](double x) { return x == 0.0; });
}

double Point::norm1() const noexcept {
  double s = 0.0;
  for (double x : coords_) s += std::abs(x);
  return s;
}

double Point::norm2() const noexcept {
  double s = 0.0;
  for (double x : coords_) s += x * x;
  return std::sqrt(s);
}

std::string_view to_string(ProcessKind kind) {
  return kind == ProcessKind::Bernoulli ? "bernoulli" : "gaussian";
}

ProcessKind parse_process_kind(std::string_view text) {
  if (text == "bernoulli") return ProcessKind::Bernoulli;
  if (text == "gaussian") return ProcessKind::Gaussian;
  throw ParameterError("kind", "unknown process kind '" + std::string(text) +
                                   "'");
}

FiniteSet::FiniteSet(std::string name, std::vector<Point> points)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.empty()) throw ValidationError("set '" + name_ + "' is empty");
  dim_ = points_.front().dim();
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].dim() != dim_) {
      throw ValidationError("points[" + std::to_string(i) + "] has dim " +
                            std::to_string(points_[i].dim()) +
                            ", expected " + std::to_string(dim_));
    }
    auto c = points_[i].coords();
    if (!seen.emplace(c.begin(), c.end()).second) {
      throw ValidationError("points[" + std::to_string(i) +
                            "] duplicates an earlier point");
    }
  }
}

bool FiniteSet::contains(const Point& p) const {
  return std::find(points_.begin(), points_.end(), p) != points_.end();
}

FiniteSet FiniteSet::scaled(double c, std::string name) const {
  std::vector<Point> out;
  out.reserve(size());
  for (const auto& p : points_) out.push_back(p.scaled(c));
  return FiniteSet(std::move(name), std::move(out));
}

std::string FiniteSet::content_hash() const {
  std::uint64_t h = fnv1a64(std::to_string(dim_));
  for (const auto& p : points_) {
    for (double x : p.coords()) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      char buf[sizeof bits];
      std::memcpy(buf, &bits, sizeof bits);
      h = fnv1a64(std::string_view(buf, sizeof buf), h);
    }
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::vector<Point> distinct_points(std::span<const Point> points) {
  std::vector<Point> out;
  std::set<std::vector<double>> seen;
  for (const auto& p : points) {
    auto c = p.coords();
    if (seen.emplace(c.begin(), c.end()).second) out.push_back(p);
  }
  return out;
}

namespace {

constexpr std::pair<SetKind, std::string_view> kSetKindNames[] = {
    {SetKind::RandomSphere, "random_sphere"},
    {SetKind::SimplexVertices, "simplex_vertices"},
    {SetKind::EllipsoidSample, "ellipsoid_sample"},
    {SetKind::CubeVertices, "cube_vertices"},
    {SetKind::DisjointBlocks, "disjoint_blocks"},
};

std::vector<double> sphere_draw(const CounterStream& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm2 = 0.0;
  // Redraw on the measure-zero event of an all-zero vector.
  for (std::uint64_t attempt = 0;; ++attempt) {
    norm2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      v[j] = rng.normal(attempt * dim + j);
      norm2 += v[j] * v[j];
    }
    if (norm2 > 0.0) break;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

std::string generated_name(SetKind kind, std::size_t dim, std::size_t count,
                           Seed seed) {
  return std::string(to_string(kind)) + "-d" + std::to_string(dim) + "-n" +
         std::to_string(count) + "-s" + std::to_string(seed.value);
}

}  // namespace

std::string_view to_string(SetKind kind) {
  for (const auto& [k, name] : kSetKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SetKind parse_set_kind(std::string_view text) {
  for (const auto& [k, name] : kSetKindNames) {
    if (name == text) return k;
  }
  // Short aliases used on the command line.
  if (text == "sphere") return SetKind::RandomSphere;
  if (text == "simplex") return SetKind::SimplexVertices;
  if (text == "ellipsoid") return SetKind::EllipsoidSample;
  if (text == "cube") return SetKind::CubeVertices;
  if (text == "blocks") return SetKind::DisjointBlocks;
  throw ParameterError("kind", "unknown set kind '" + std::string(text) + "'");
}

FiniteSet generate_set(SetKind kind, std::size_t dim, std::size_t count,
                       Seed seed, std::span<const double> params) {
  if (dim < 1) throw ParameterError("dim", "must be >= 1");
  if (count < 1) throw ParameterError("count", "must be >= 1");
  const std::string label(to_string(kind));
  std::vector<Point> points;
  points.reserve(count);

  switch (kind) {
    case SetKind::RandomSphere: {
      const double radius = params.empty() ? 1.0 : params[0];
      if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ParameterError("params[0]", "radius must be positive");
      }
      if (dim == 1 && count > 2) {
        throw ParameterError("count", "the 1-d sphere has only 2 points");
      }
      for (std::size_t i = 0; i < count; ++i) {
        auto v = sphere_draw(CounterStream(seed.value, label, i), dim);
        for (double& x : v) x *= radius;
        points.emplace_back(std::move(v));
      }
      break;
    }
    case SetKind::SimplexVertices: {
      if (count > dim) {
        throw ParameterError("count", "simplex_vertices needs count <= dim");
      }
      for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v(dim, 0.0);
        v[i] = 1.0;
        points.emplace_back(std::move(v));
      }
      break;
    }
    case SetKind::EllipsoidSample: {
      std::vector<double> axes(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        axes[j] = j < params.size() ? params[j] : 1.0 / double(j + 1);
        if (!(axes[j] > 0.0) || !std::isfinite(axes[j])) {
          throw ParameterError("params[" + std::to_string(j) + "]",
                               "semi-axis must be positive");
        }
      }
      for (std::size_t i = 0; i < count; ++i) {
        auto v = sphere_draw(CounterStream(seed.value, label, i), dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] *= axes[j];
        points.emplace_back(std::move(v));
      }
      break;
    }
    case SetKind::CubeVertices: {
      const bool enumerable = dim < 63;
      if (enumerable && count > (std::uint64_t{1} << dim)) {
        throw ParameterError("count", "cube_vertices needs count <= 2^dim");
      }
      if (enumerable && count == (std::uint64_t{1} << dim)) {
        for (std::uint64_t m = 0; m < count; ++m) {
          std::vector<double> v(dim);
          for (std::size_t j = 0; j < dim; ++j) v[j] = (m >> j) & 1U ? -1 : 1;
          points.emplace_back(std::move(v));
        }
        break;
      }
      std::set<std::vector<double>> seen;
      for (std::uint64_t draw = 0; points.size() < count; ++draw) {
        const CounterStream rng(seed.value, label, draw);
        std::vector<double> v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = rng.sign(j);
        if (seen.insert(v).second) points.emplace_back(std::move(v));
      }
      break;
    }
    case SetKind::DisjointBlocks: {
      if (params.empty()) {
        throw ParameterError("params[0]", "block length is required");
      }
      const double b_real = params[0];
      if (!(b_real >= 1.0) || b_real != std::floor(b_real)) {
        throw ParameterError("params[0]", "block length must be an integer >= 1");
      }
      const auto block = static_cast<std::size_t>(b_real);
      if (block * count > dim) {
        throw ParameterError("count", "disjoint_blocks needs block*count <= dim");
      }
      for (std::size_t i = 0; i < count; ++i) {
        const CounterStream rng(seed.value, label, i);
        std::vector<double> v(dim, 0.0);
        std::size_t strongest = 0;
        bool any = false;
        for (std::size_t j = 0; j < block; ++j) {
          const double g = rng.normal(j);
          if (std::abs(g) > std::abs(rng.normal(strongest))) strongest = j;
          // Each coordinate of the block is dropped with probability 1/4.
          if (rng.uniform(2 * block + j) >= 0.25) {
            v[i * block + j] = g;
            any = true;
          }
        }
        if (!any) v[i * block + strongest] = rng.normal(strongest);
        points.emplace_back(std::move(v));
      }
      break;
    }
  }
  return FiniteSet(generated_name(kind, dim, count, seed), std::move(points));
}

FiniteSet center_at_zero(const FiniteSet& set) {
  const Point origin = set[0];
  std::vector<Point> out;
  out.reserve(set.size());
  for (const auto& p : set.points()) out.push_back(p - origin);
  return FiniteSet(set.name(), std::move(out));
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

FiniteSet parse_set(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)),
                     "malformed set document");
  }
  if (!doc.is_object()) throw ParseError("<root>", "expected an object");
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ParseError("name", "expected a string");
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned() ||
      doc["dim"].get<std::size_t>() < 1) {
    throw ParseError("dim", "expected a positive integer");
  }
  if (!doc.contains("points") || !doc["points"].is_array()) {
    throw ParseError("points", "expected an array");
  }
  const auto dim = doc["dim"].get<std::size_t>();
  const auto& rows = doc["points"];
  if (rows.empty()) throw ValidationError("points: set must be nonempty");
  std::vector<Point> points;
  points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!rows[i].is_array()) throw ParseError(where, "expected an array");
    if (rows[i].size() != dim) {
      throw ValidationError(where + " has " + std::to_string(rows[i].size()) +
                            " coordinates, expected dim " +
                            std::to_string(dim));
    }
    std::vector<double> coords;
    coords.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!rows[i][j].is_number()) {
        throw ParseError(where + "[" + std::to_string(j) + "]",
                         "expected a number");
      }
      coords.push_back(rows[i][j].get<double>());
    }
    points.emplace_back(std::move(coords));
  }
  return FiniteSet(doc["name"].get<std::string>(), std::move(points));
}

std::string format_set(const FiniteSet& set) {
  json doc;
  doc["name"] = set.name();
  doc["dim"] = set.dim();
  json rows = json::array();
  for (const auto& p : set.points()) {
    rows.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
  }
  doc["points"] = std::move(rows);
  return doc.dump(1) + "\n";
}

FiniteSet load_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_set(buf.str());
}

void save_set(const FiniteSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << format_set(set);
}

}  // namespace canonproc
