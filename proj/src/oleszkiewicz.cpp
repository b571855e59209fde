#include "canonproc/oleszkiewicz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "canonproc/errors.hpp"
#include "canonproc/rng.hpp"
#include "summation.hpp"

namespace canonproc {

using json = nlohmann::ordered_json;

std::string_view to_string(NormTag tag) {
  return tag == NormTag::Sup ? "sup" : "euclidean";
}

NormTag parse_norm_tag(std::string_view text) {
  if (text == "sup") return NormTag::Sup;
  if (text == "euclidean") return NormTag::Euclidean;
  throw ParameterError("norm", "unknown norm tag '" + std::string(text) + "'");
}

VectorSystem::VectorSystem(std::vector<std::vector<double>> vectors, NormTag norm)
    : vectors_(std::move(vectors)), norm_(norm) {
  if (vectors_.empty()) throw ValidationError("vector system has no terms");
  const std::size_t m = vectors_.front().size();
  if (m == 0) throw ValidationError("vectors must have dimension >= 1");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].size() != m) {
      throw ValidationError("vectors[" + std::to_string(i) + "] has dimension " +
                            std::to_string(vectors_[i].size()) + ", expected " +
                            std::to_string(m));
    }
    for (double v : vectors_[i]) {
      if (!std::isfinite(v)) {
        throw ValidationError("vectors[" + std::to_string(i) + "] is not finite");
      }
    }
  }
}

double VectorSystem::norm_of(std::span<const double> v) const {
  if (norm_ == NormTag::Sup) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> VectorSystem::coefficients(
    std::span<const double> functional) const {
  if (functional.size() != ambient_dim()) {
    throw ValidationError("functional dimension differs from the system");
  }
  std::vector<double> out(terms());
  for (std::size_t i = 0; i < terms(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ambient_dim(); ++j) s += functional[j] * vectors_[i][j];
    out[i] = s;
  }
  return out;
}

VectorSystem VectorSystem::scaled(double c) const {
  auto v = vectors_;
  for (auto& row : v) {
    for (double& x : row) x *= c;
  }
  return VectorSystem(std::move(v), norm_);
}

VectorSystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    throw ParseError("line " + std::to_string(1 + std::count(upto.begin(), upto.end(), '\n')),
                     "malformed vector system document");
  }
  if (!doc.is_object()) throw ParseError("<root>", "expected an object");
  if (!doc.contains("norm") || !doc["norm"].is_string()) {
    throw ParseError("norm", "expected \"sup\" or \"euclidean\"");
  }
  if (!doc.contains("vectors") || !doc["vectors"].is_array()) {
    throw ParseError("vectors", "expected an array");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < doc["vectors"].size(); ++i) {
    const auto& row = doc["vectors"][i];
    const std::string where = "vectors[" + std::to_string(i) + "]";
    if (!row.is_array()) throw ParseError(where, "expected an array");
    std::vector<double> v;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        throw ParseError(where + "[" + std::to_string(j) + "]", "expected a number");
      }
      v.push_back(row[j].get<double>());
    }
    rows.push_back(std::move(v));
  }
  return VectorSystem(std::move(rows), parse_norm_tag(doc["norm"].get<std::string>()));
}

std::string format_system(const VectorSystem& system) {
  json doc;
  doc["norm"] = to_string(system.norm());
  doc["vectors"] = system.vectors();
  return doc.dump(1) + "\n";
}

VectorSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

void save_system(const VectorSystem& system, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << format_system(system);
}

FunctionalSample::FunctionalSample(std::vector<std::vector<double>> functionals,
                                   NormTag norm, Seed seed)
    : functionals_(std::move(functionals)), norm_(norm), seed_(seed) {
  for (std::size_t k = 0; k < functionals_.size(); ++k) {
    double dual = 0.0;
    for (double v : functionals_[k]) dual += norm_ == NormTag::Sup ? std::abs(v) : v * v;
    if (norm_ == NormTag::Euclidean) dual = std::sqrt(dual);
    if (!(dual <= 1.0 + 1e-12)) {
      throw ValidationError("functional " + std::to_string(k) +
                            " lies outside the dual unit ball");
    }
  }
}

FunctionalSample sample_functionals(std::size_t ambient_dim, NormTag norm,
                                    std::size_t random, Seed seed) {
  if (ambient_dim == 0) throw ParameterError("ambient_dim", "must be >= 1");
  std::vector<std::vector<double>> out;
  if (norm == NormTag::Sup) {
    for (std::size_t j = 0; j < ambient_dim; ++j) {
      for (double s : {1.0, -1.0}) {
        std::vector<double> f(ambient_dim, 0.0);
        f[j] = s;
        out.push_back(std::move(f));
      }
    }
  }
  for (std::size_t k = 0; k < random; ++k) {
    const CounterStream rng(seed.value, "functional/" + std::string(to_string(norm)), k);
    std::vector<double> f(ambient_dim);
    double total = 0.0;
    if (norm == NormTag::Sup) {
      // Exponential weights give a uniform point of the simplex.
      for (std::size_t j = 0; j < ambient_dim; ++j) {
        f[j] = -std::log(rng.uniform(2 * j));
        total += f[j];
      }
      for (std::size_t j = 0; j < ambient_dim; ++j) {
        f[j] = (rng.uniform(2 * j + 1) < 0.5 ? -1.0 : 1.0) * f[j] / total;
      }
    } else {
      for (std::size_t j = 0; j < ambient_dim; ++j) {
        f[j] = rng.normal(j);
        total += f[j] * f[j];
      }
      total = std::sqrt(total);
      for (double& v : f) v /= total;
    }
    out.push_back(std::move(f));
  }
  return FunctionalSample(std::move(out), norm, seed);
}

namespace {

void check_pair(const VectorSystem& x, const VectorSystem& y) {
  if (x.terms() != y.terms() || x.ambient_dim() != y.ambient_dim()) {
    throw ValidationError("vector systems differ in shape");
  }
  if (x.norm() != y.norm()) throw ValidationError("vector systems differ in norm");
}

// ||sum a_i eps_i||_p for p = 1..p_max.
std::vector<double> scalar_moments(const std::vector<double>& a, std::size_t p_max,
                                   std::size_t d_max) {
  std::vector<double> out(p_max + 1, 0.0);
  const bool zero = std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
  if (zero) return out;
  if (a.size() <= d_max) {
    const auto sums = rademacher_sums(a, d_max);
    for (std::size_t p = 1; p <= p_max; ++p) {
      detail::NeumaierSum acc;
      for (double s : sums) acc.add(std::pow(std::abs(s), double(p)));
      out[p] = std::pow(acc.value() / double(sums.size()), 1.0 / double(p));
    }
  } else {
    const Point t(a);
    for (std::size_t p = 1; p <= p_max; ++p) out[p] = bernoulli_norm_proxy(t, p).proxy;
  }
  return out;
}

}  // namespace

WeakMomentReport weak_moment_constant(const VectorSystem& x, const VectorSystem& y,
                                      const FunctionalSample& funcs,
                                      std::size_t p_max, std::size_t d_max) {
  check_pair(x, y);
  if (p_max < 1) throw ParameterError("p_max", "must be >= 1");
  WeakMomentReport report;
  bool any = false;
  for (std::size_t k = 0; k < funcs.size(); ++k) {
    const auto num = scalar_moments(x.coefficients(funcs[k]), p_max, d_max);
    const auto den = scalar_moments(y.coefficients(funcs[k]), p_max, d_max);
    for (std::size_t p = 1; p <= p_max; ++p) {
      if (num[p] == 0.0 && den[p] == 0.0) continue;
      ++report.evaluated;
      const double r = safe_ratio(num[p], den[p]);
      if (!any || r > report.value) {
        report.value = r;
        report.functional = k;
        report.p = p;
        any = true;
      }
    }
  }
  return report;
}

ContractionReport check_ole6(const VectorSystem& x, const VectorSystem& y,
                             const FunctionalSample& funcs, std::size_t p_max,
                             double tol) {
  check_pair(x, y);
  std::vector<IncrementPair> increments;
  increments.reserve(funcs.size());
  for (std::size_t k = 0; k < funcs.size(); ++k) {
    const auto a = x.coefficients(funcs[k]);
    const auto b = y.coefficients(funcs[k]);
    increments.push_back({TrimmedProfile(a), TrimmedProfile(b), k, 0});
  }
  return fit_min_c_increments(increments, p_max, tol);
}

Quantity strong_moment(const VectorSystem& x, std::size_t samples, Seed seed,
                       std::size_t d_max) {
  const std::size_t n = x.terms();
  const std::size_t m = x.ambient_dim();
  Quantity q{"E||sum eps_i x_i||", 0.0, 0.0};
  std::vector<double> v(m);
  if (n <= d_max) {
    // Per ambient coordinate, the 2^n values of sum_i eps_i x_{i,j}.
    std::vector<std::vector<double>> column_sums(m);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) column[i] = x.vector(i)[j];
      column_sums[j] = rademacher_sums(column, d_max);
    }
    const std::size_t patterns = column_sums.front().size();
    detail::NeumaierSum acc;
    for (std::size_t s = 0; s < patterns; ++s) {
      for (std::size_t j = 0; j < m; ++j) v[j] = column_sums[j][s];
      acc.add(x.norm_of(v));
    }
    q.value = acc.value() / double(patterns);
    return q;
  }
  if (samples < 2) throw ParameterError("samples", "must be >= 2");
  detail::Welford stats;
  for (std::size_t s = 0; s < samples; ++s) {
    const CounterStream rng(seed.value, "strong_moment", s);
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = rng.sign(i);
      for (std::size_t j = 0; j < m; ++j) v[j] += e * x.vector(i)[j];
    }
    stats.add(x.norm_of(v));
  }
  q.value = stats.mean();
  q.std_error = stats.std_error();
  return q;
}

ComparisonReport strong_moment_ratio(const VectorSystem& x, const VectorSystem& y,
                                     std::size_t samples, Seed seed,
                                     std::size_t d_max) {
  check_pair(x, y);
  Quantity num = strong_moment(x, samples, seed, d_max);
  Quantity den = strong_moment(y, samples, seed, d_max);
  num.name = "E||sum eps_i x_i||";
  den.name = "E||sum eps_i y_i||";
  return make_comparison("E||sum x_i eps_i|| <= K E||sum y_i eps_i||", num, den,
                         std::nullopt);
}

}  // namespace canonproc
