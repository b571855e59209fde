#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "canonproc/chaining.hpp"
#include "canonproc/cli.hpp"
#include "canonproc/contraction.hpp"
#include "canonproc/core.hpp"
#include "canonproc/decomposition.hpp"
#include "canonproc/errors.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/oleszkiewicz.hpp"
#include "canonproc/serialize.hpp"
#include "canonproc/suprema.hpp"

namespace py = pybind11;
using namespace canonproc;

namespace {

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: {
      const auto& s = j.get_ref<const std::string&>();
      if (s == "inf") return py::float_(std::numeric_limits<double>::infinity());
      return py::str(s);
    }
    case Json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_py(x));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, x] : j.items()) out[py::str(k)] = to_py(x);
      return out;
    }
    default: return py::none();
  }
}

std::vector<Point> to_points(const std::vector<std::vector<double>>& rows) {
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r);
  return pts;
}

std::vector<std::vector<double>> from_points(std::span<const Point> pts) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) rows.emplace_back(p.coords().begin(), p.coords().end());
  return rows;
}

MomentModel model_from_name(const std::string& name, std::size_t samples, std::uint64_t seed) {
  if (name == "gaussian") return MomentModel::gaussian_exact();
  if (name == "bernoulli-exact") return MomentModel::bernoulli_exact();
  if (name == "bernoulli-proxy") return MomentModel::bernoulli_proxy();
  if (name == "mc-bernoulli") return MomentModel::monte_carlo(ProcessKind::Bernoulli, samples, Seed{seed});
  if (name == "mc-gaussian") return MomentModel::monte_carlo(ProcessKind::Gaussian, samples, Seed{seed});
  throw ParameterError("model", "unknown moment model '" + name + "'");
}

MappedPair make_pair(const FiniteSet& set, const py::object& phi) {
  if (py::isinstance<py::str>(phi)) {
    return apply_coordinate_map(set, parse_coordinate_map(phi.cast<std::string>()));
  }
  return MappedPair(set, to_points(phi.cast<std::vector<std::vector<double>>>()));
}

}  // namespace

PYBIND11_MODULE(_canonproc, m) {
  m.doc() = "Suprema, chaining bounds and contraction checks for canonical processes";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());

  py::class_<FiniteSet>(m, "FiniteSet")
      .def(py::init([](std::string name, const std::vector<std::vector<double>>& rows) {
             return FiniteSet(std::move(name), to_points(rows));
           }),
           py::arg("name"), py::arg("points"))
      .def_property_readonly("name", &FiniteSet::name)
      .def_property_readonly("dim", &FiniteSet::dim)
      .def_property_readonly("points", [](const FiniteSet& s) { return from_points(s.points()); })
      .def("content_hash", &FiniteSet::content_hash)
      .def("__len__", &FiniteSet::size)
      .def("__eq__", [](const FiniteSet& a, const FiniteSet& b) { return a == b; })
      .def("__repr__", [](const FiniteSet& s) {
        return "FiniteSet('" + s.name() + "', size=" + std::to_string(s.size()) +
               ", dim=" + std::to_string(s.dim()) + ")";
      });

  m.def("generate_set",
        [](const std::string& kind, std::size_t dim, std::size_t count, std::uint64_t seed,
           std::vector<double> params) {
          return generate_set(parse_set_kind(kind), dim, count, Seed{seed}, params);
        },
        py::arg("kind"), py::arg("dim"), py::arg("count"), py::arg("seed") = 0,
        py::arg("params") = std::vector<double>{});
  m.def("parse_set", [](const std::string& text) { return parse_set(text); }, py::arg("text"));
  m.def("format_set", &format_set, py::arg("set"));

  m.def("bernoulli_norm_proxy",
        [](const std::vector<double>& t, std::size_t p) {
          return to_py(to_json(bernoulli_norm_proxy(Point(t), p)));
        },
        py::arg("t"), py::arg("p"));
  m.def("bernoulli_norm_exact",
        [](const std::vector<double>& t, double p, std::size_t d_max) {
          return bernoulli_norm_exact(Point(t), p, d_max);
        },
        py::arg("t"), py::arg("p"), py::arg("d_max") = kDefaultDMax);
  m.def("gaussian_norm_exact",
        [](const std::vector<double>& t, double p) { return gaussian_norm_exact(Point(t), p); },
        py::arg("t"), py::arg("p"));
  m.def("gaussian_moment_constant", &gaussian_moment_constant, py::arg("p"));
  m.def("mc_norm",
        [](const std::string& kind, const std::vector<double>& t, double p, std::size_t samples,
           std::uint64_t seed) {
          const auto e = mc_norm(parse_process_kind(kind), Point(t), p, samples, Seed{seed});
          return py::make_tuple(e.estimate, e.std_error);
        },
        py::arg("kind"), py::arg("t"), py::arg("p"), py::arg("samples"), py::arg("seed") = 0);

  m.def("brute_force_bernoulli_sup",
        [](const FiniteSet& s, std::size_t d_max) {
          return to_py(to_json(brute_force_bernoulli_sup(s, d_max)));
        },
        py::arg("set"), py::arg("d_max") = kDefaultDMax);
  m.def("mc_sup",
        [](const std::string& kind, const FiniteSet& s, std::size_t samples, std::uint64_t seed) {
          return to_py(to_json(mc_sup(parse_process_kind(kind), s, samples, Seed{seed})));
        },
        py::arg("kind"), py::arg("set"), py::arg("samples"), py::arg("seed") = 0);

  m.def("chain_bound",
        [](const FiniteSet& s, const std::string& model, bool include_tree) {
          const auto b = chain_bound(s, build_partition_greedy(s), model_from_name(model, 10000, 0));
          return to_py(to_json(b, include_tree));
        },
        py::arg("set"), py::arg("model") = "gaussian", py::arg("include_tree") = true);
  m.def("exhaustive_gamma",
        [](const FiniteSet& s, const std::string& model, bool include_tree) {
          return to_py(to_json(exhaustive_gamma(s, model_from_name(model, 10000, 0)), include_tree));
        },
        py::arg("set"), py::arg("model") = "gaussian", py::arg("include_tree") = true);
  m.def("verify_theorem2",
        [](const FiniteSet& s, const std::string& kind, std::size_t samples, std::uint64_t seed) {
          return to_py(to_json(verify_theorem2(s, parse_process_kind(kind), samples, Seed{seed})));
        },
        py::arg("set"), py::arg("kind") = "bernoulli", py::arg("samples") = 100000,
        py::arg("seed") = 0);

  m.def("check_condition",
        [](const FiniteSet& s, const py::object& phi, double c, std::optional<std::size_t> p_max) {
          return to_py(to_json(check_condition(make_pair(s, phi), c, p_max.value_or(s.dim()))));
        },
        py::arg("set"), py::arg("phi"), py::arg("c") = 1.0, py::arg("p_max") = py::none(),
        "phi: a map spec such as 'clamp' or 'scale:2', or the list of image points");
  m.def("fit_min_c",
        [](const FiniteSet& s, const py::object& phi, std::optional<std::size_t> p_max, double tol,
           double cap) {
          return to_py(to_json(fit_min_C(make_pair(s, phi), p_max.value_or(s.dim()), tol, cap)));
        },
        py::arg("set"), py::arg("phi"), py::arg("p_max") = py::none(),
        py::arg("tol") = kDefaultTolerance, py::arg("cap") = kDefaultCCap);

  m.def("decompose",
        [](const FiniteSet& s, std::size_t samples, std::uint64_t seed, bool per_point) {
          DecompositionOptions o{samples, Seed{seed}, kDefaultDMax, per_point};
          return to_py(to_json(decompose_by_sweep(s, o)));
        },
        py::arg("set"), py::arg("samples") = 100000, py::arg("seed") = 0,
        py::arg("per_point") = false);

  m.def("weak_moment_constant",
        [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
           const std::string& norm, std::size_t functionals, std::size_t p_max, std::uint64_t seed) {
          const NormTag tag = parse_norm_tag(norm);
          const VectorSystem sx(x, tag), sy(y, tag);
          const auto f = sample_functionals(sx.ambient_dim(), tag, functionals, Seed{seed});
          return to_py(to_json(weak_moment_constant(sx, sy, f, p_max)));
        },
        py::arg("x"), py::arg("y"), py::arg("norm") = "euclidean", py::arg("functionals") = 64,
        py::arg("p_max") = 8, py::arg("seed") = 0);
  m.def("strong_moment_ratio",
        [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
           const std::string& norm, std::size_t samples, std::uint64_t seed) {
          const NormTag tag = parse_norm_tag(norm);
          return to_py(to_json(strong_moment_ratio(VectorSystem(x, tag), VectorSystem(y, tag),
                                                   samples, Seed{seed})));
        },
        py::arg("x"), py::arg("y"), py::arg("norm") = "euclidean", py::arg("samples") = 100000,
        py::arg("seed") = 0);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
