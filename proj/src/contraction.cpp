#include "canonproc/contraction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "canonproc/errors.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc {

MappedPair::MappedPair(FiniteSet source, std::vector<Point> image,
                       std::vector<std::size_t> correspondence)
    : source_(std::move(source)),
      image_(std::move(image)),
      correspondence_(std::move(correspondence)) {
  if (image_.size() != source_.size()) {
    throw ValidationError("image has " + std::to_string(image_.size()) +
                          " points, source has " +
                          std::to_string(source_.size()));
  }
  if (correspondence_.size() != source_.size()) {
    throw ValidationError("correspondence length differs from the source size");
  }
  std::vector<bool> hit(image_.size(), false);
  for (std::size_t i = 0; i < correspondence_.size(); ++i) {
    const std::size_t j = correspondence_[i];
    if (j >= image_.size() || hit[j]) {
      throw ValidationError("correspondence is not a bijection (entry " +
                            std::to_string(i) + ")");
    }
    hit[j] = true;
  }
  for (std::size_t j = 1; j < image_.size(); ++j) {
    if (image_[j].dim() != image_[0].dim()) {
      throw ValidationError("image points differ in dimension");
    }
  }
}

namespace {

std::vector<std::size_t> identity_correspondence(std::size_t n) {
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  return id;
}

}  // namespace

MappedPair::MappedPair(FiniteSet source, std::vector<Point> image)
    : MappedPair(source, image, identity_correspondence(image.size())) {}

double CoordinateMap::operator()(double x) const {
  switch (kind) {
    case Kind::Scale: return a * x;
    case Kind::Clamp: return std::clamp(x, a, b);
    case Kind::Abs: return std::abs(x);
    case Kind::SoftThreshold: {
      const double m = std::max(std::abs(x) - a, 0.0);
      return std::copysign(m, x) + 0.0;
    }
  }
  return x;
}

std::string CoordinateMap::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Scale: os << "scale:" << a; break;
    case Kind::Clamp: os << "clamp:" << a << ":" << b; break;
    case Kind::Abs: os << "abs"; break;
    case Kind::SoftThreshold: os << "soft:" << a; break;
  }
  return os.str();
}

namespace {

double parse_number(std::string_view text, const std::string& field) {
  std::string buf(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != buf.size() || buf.empty() || !std::isfinite(v)) {
    throw ParameterError(field, "expected a number, got '" + buf + "'");
  }
  return v;
}

}  // namespace

CoordinateMap parse_coordinate_map(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto name = parts[0];
  if (name == "abs" && parts.size() == 1) return CoordinateMap::abs();
  if (name == "clamp" && parts.size() == 1) return CoordinateMap::clamp();
  if (name == "clamp" && parts.size() == 3) {
    const double lo = parse_number(parts[1], "map.lo");
    const double hi = parse_number(parts[2], "map.hi");
    if (lo > hi) throw ParameterError("map", "clamp needs lo <= hi");
    return CoordinateMap::clamp(lo, hi);
  }
  if (name == "scale" && parts.size() == 2) {
    return CoordinateMap::scale(parse_number(parts[1], "map.c"));
  }
  if (name == "soft" && parts.size() == 2) {
    const double level = parse_number(parts[1], "map.level");
    if (level < 0.0) throw ParameterError("map", "soft threshold must be >= 0");
    return CoordinateMap::soft_threshold(level);
  }
  throw ParameterError("map", "unknown coordinate map '" + std::string(spec) + "'");
}

MappedPair apply_coordinate_map(const FiniteSet& set, const CoordinateMap& map) {
  std::vector<Point> image;
  image.reserve(set.size());
  for (const auto& p : set.points()) {
    std::vector<double> v(p.coords().begin(), p.coords().end());
    for (double& x : v) x = map(x);
    image.emplace_back(std::move(v));
  }
  return MappedPair(set, std::move(image));
}

double trimmed_sq_distance(const Point& s, const Point& t, std::size_t p) {
  if (s.dim() != t.dim()) throw ValidationError("dimension mismatch");
  return tail_sq((t - s).coords(), p);
}

TrimmedProfile::TrimmedProfile(std::span<const double> increment) {
  std::vector<double> sq(increment.size());
  std::transform(increment.begin(), increment.end(), sq.begin(),
                 [](double x) { return x * x; });
  std::sort(sq.begin(), sq.end());
  prefix_.assign(sq.size() + 1, 0.0);
  for (std::size_t m = 0; m < sq.size(); ++m) prefix_[m + 1] = prefix_[m] + sq[m];
}

double TrimmedProfile::value(std::size_t p) const {
  const std::size_t d = dim();
  return prefix_[d - std::min(p, d)];
}

ConditionCheck check_increments(std::span<const IncrementPair> increments,
                                double c, std::size_t p_max) {
  if (!(c >= 1.0)) throw ParameterError("C", "must be >= 1");
  ConditionCheck out;
  bool first = true;
  const double c2 = c * c;
  for (const auto& inc : increments) {
    // Coordinate maps round, so an exact contraction can overshoot by ulps.
    const double slack =
        kConditionRoundingSlack * (inc.lhs.value(0) + c2 * inc.rhs.value(0));
    for (std::size_t p = 0; p <= p_max; ++p) {
      const double budget = std::floor(c * static_cast<double>(p));
      const auto lhs_budget = budget >= double(inc.lhs.dim())
                                  ? inc.lhs.dim()
                                  : static_cast<std::size_t>(budget);
      const double lhs = inc.lhs.value(lhs_budget);
      const double rhs = c2 * inc.rhs.value(p);
      const double margin = lhs - rhs;
      if (first || margin > out.margin) {
        out.margin = margin;
        out.worst = {inc.first, inc.second, p};
        first = false;
      }
      if (lhs > rhs + slack) out.holds = false;
    }
  }
  return out;
}

std::vector<IncrementPair> pair_increments(const MappedPair& pair) {
  std::vector<IncrementPair> out;
  const auto& src = pair.source();
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = i + 1; j < src.size(); ++j) {
      const Point image_diff = pair.image_of(j) - pair.image_of(i);
      const Point source_diff = src[j] - src[i];
      out.push_back({TrimmedProfile(image_diff.coords()),
                     TrimmedProfile(source_diff.coords()), i, j});
    }
  }
  return out;
}

ConditionCheck check_condition(const MappedPair& pair, double c,
                               std::size_t p_max) {
  return check_increments(pair_increments(pair), c, p_max);
}

ContractionReport fit_min_c_increments(std::span<const IncrementPair> increments,
                                       std::size_t p_max, double tol,
                                       double cap) {
  if (!(tol > 0.0)) throw ParameterError("tol", "must be positive");
  ContractionReport report;
  report.p_max = p_max;
  report.tolerance = tol;
  report.cap = cap;
  auto finish = [&](double c) {
    const auto check = check_increments(increments, c, p_max);
    report.worst = check.worst;
    report.margin = check.margin;
    return check.holds;
  };
  if (finish(1.0)) {
    report.c_star = 1.0;
    return report;
  }
  double lo = 1.0;
  double hi = 2.0;
  while (!check_increments(increments, hi, p_max).holds) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) {
      finish(cap);
      return report;  // infeasible
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (check_increments(increments, mid, p_max).holds) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  finish(hi);
  report.c_star = hi;
  return report;
}

ContractionReport fit_min_C(const MappedPair& pair, std::size_t p_max,
                            double tol, double cap) {
  return fit_min_c_increments(pair_increments(pair), p_max, tol, cap);
}

ComparisonReport compare_suprema(const MappedPair& pair, std::size_t samples,
                                 Seed seed, std::size_t d_max) {
  const auto image = distinct_points(pair.image());
  const SupEstimate mapped = bernoulli_sup(image, samples, seed, d_max);
  const SupEstimate source = bernoulli_sup(pair.source().points(), samples, seed, d_max);
  return make_comparison("S_B(phi(T)) <= K * S_B(T)",
                         {"S_B(phi(T))", mapped.value, mapped.std_error},
                         {"S_B(T)", source.value, source.std_error}, std::nullopt);
}

}  // namespace canonproc
