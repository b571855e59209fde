#include "canonproc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "canonproc/acceptance.hpp"
#include "canonproc/chaining.hpp"
#include "canonproc/contraction.hpp"
#include "canonproc/core.hpp"
#include "canonproc/decomposition.hpp"
#include "canonproc/errors.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/oleszkiewicz.hpp"
#include "canonproc/rng.hpp"
#include "canonproc/serialize.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc::cli {

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  std::size_t d_max = kDefaultDMax;
  double tol = kDefaultTolerance;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* sub, Common& c, bool with_samples = true) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  if (with_samples) {
    sub->add_option("--samples", c.samples, "Monte Carlo samples")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  }
  sub->add_option("--d-max", c.d_max, "largest dimension enumerated exactly")
      ->capture_default_str();
  sub->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", c.out, "output path (default: stdout)");
}

Json base_config(const Common& c, bool with_samples = true) {
  Json j{{"seed", c.seed}};
  if (with_samples) j["samples"] = c.samples;
  j["d_max"] = c.d_max;
  j["format"] = c.format;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Leaf values of a JSON document as path,value rows.
void flatten(const Json& v, const std::string& path, std::ostream& os) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, path.empty() ? k : path + "." + k, os);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << csv_field(path) << "," << csv_field(scalar_text(v)) << "\n";
  }
}

// Writes a table whose rows are objects sharing the keys of the first row.
void write_table(const Json& rows, std::ostream& os) {
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [k, x] : rows[0].items()) {
    os << (first ? "" : ",") << csv_field(k);
    first = false;
  }
  os << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, x] : row.items()) {
      os << (first ? "" : ",") << csv_field(scalar_text(x));
      first = false;
    }
    os << "\n";
  }
}

struct Output {
  Json report;
  Json table;  // optional row list used for csv
  int code = kExitOk;
};

void emit(const Output& o, const Common& c, std::ostream& out) {
  std::ostringstream text;
  if (c.format == "csv") {
    if (o.table.is_array() && !o.table.empty()) {
      write_table(o.table, text);
    } else {
      text << "key,value\n";
      flatten(o.report, "", text);
    }
  } else {
    text << o.report.dump(2) << "\n";
  }
  if (c.out.empty()) {
    out << text.str();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + c.out);
  f << text.str();
}

Json input_ref(const std::string& path, const FiniteSet& set) {
  Json j = set_reference(set);
  j["path"] = path;
  return j;
}

MomentModel parse_model(const std::string& name, const Common& c) {
  if (name == "gaussian") return MomentModel::gaussian_exact();
  if (name == "bernoulli-exact") return MomentModel::bernoulli_exact(c.d_max);
  if (name == "bernoulli-proxy") return MomentModel::bernoulli_proxy();
  if (name == "mc-bernoulli") return MomentModel::monte_carlo(ProcessKind::Bernoulli, c.samples, Seed{c.seed});
  if (name == "mc-gaussian") return MomentModel::monte_carlo(ProcessKind::Gaussian, c.samples, Seed{c.seed});
  throw ParameterError("model", "unknown moment model '" + name + "'");
}

// Image document: {"points": [...], "correspondence": [...]}; points may repeat.
MappedPair load_image(const FiniteSet& source, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw ParseError("points", "expected an array of points");
  }
  std::vector<Point> image;
  for (std::size_t i = 0; i < doc["points"].size(); ++i) {
    const auto& row = doc["points"][i];
    if (!row.is_array()) throw ParseError("points[" + std::to_string(i) + "]", "expected an array");
    std::vector<double> v;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        throw ParseError("points[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                         "expected a number");
      }
      v.push_back(row[j].get<double>());
    }
    image.emplace_back(std::move(v));
  }
  if (!doc.contains("correspondence")) return MappedPair(source, std::move(image));
  std::vector<std::size_t> corr;
  for (const auto& x : doc["correspondence"]) {
    if (!x.is_number_unsigned()) throw ParseError("correspondence", "expected indices");
    corr.push_back(x.get<std::size_t>());
  }
  return MappedPair(source, std::move(image), std::move(corr));
}

bool within(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Suprema of canonical Bernoulli and Gaussian processes", "canonproc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common c;
  std::string set_path, kind_name = "bernoulli", model_name = "gaussian";
  std::string set_kind;
  std::size_t dim = 0, count = 0, p_max = 0;
  std::vector<double> params, point, p_list{1, 2, 3, 4, 8, 16};
  bool exact = false, exhaustive = false, no_tree = false, per_point = false;
  std::string map_spec, image_path, x_path, y_path, norm_name;
  double cap = kDefaultCCap;
  std::size_t functionals = 64;
  std::vector<int> only;
  std::function<Output()> action;

  auto* gen = app.add_subcommand("gen", "generate a seeded finite set");
  gen->add_option("--kind", set_kind, "random_sphere|simplex_vertices|ellipsoid_sample|cube_vertices|disjoint_blocks")->required();
  gen->add_option("--dim", dim)->required();
  gen->add_option("--count", count)->required();
  gen->add_option("--param", params, "kind parameters (sphere radius, ellipsoid axes, block length)");
  gen->add_option("--seed", c.seed)->capture_default_str();
  gen->add_option("--out", c.out, "output path (default: stdout)");
  gen->callback([&] {
    action = [&] {
      const FiniteSet set = generate_set(parse_set_kind(set_kind), dim, count, Seed{c.seed}, params);
      Output o;
      o.report = nullptr;
      const std::string text = format_set(set);
      if (c.out.empty()) {
        out << text;
      } else {
        save_set(set, c.out);
      }
      o.code = kExitOk;
      return o;
    };
  });

  auto* moments = app.add_subcommand("moments", "moment proxy, exact moments and the sandwich check");
  add_common(moments, c, false);
  moments->add_option("--set", set_path, "set file")->check(CLI::ExistingFile);
  moments->add_option("--point", point, "single point, comma separated")->delimiter(',');
  moments->add_option("--p", p_list, "moment orders")->delimiter(',')->capture_default_str();
  moments->callback([&] {
    action = [&] {
      std::vector<Point> pts;
      Json inputs = Json::array();
      if (!set_path.empty()) {
        const FiniteSet set = load_set(set_path);
        pts.assign(set.points().begin(), set.points().end());
        inputs.push_back(input_ref(set_path, set));
      }
      if (!point.empty()) {
        pts.emplace_back(point);
        inputs.push_back({{"point", point}});
      }
      if (pts.empty()) throw ParameterError("--set/--point", "no input given");
      Json rows = Json::array();
      std::size_t violations = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double pd : p_list) {
          if (!(pd >= 1.0) || pd != std::floor(pd)) throw ParameterError("p", "orders must be integers >= 1");
          const auto p = static_cast<std::size_t>(pd);
          const auto dec = bernoulli_norm_proxy(pts[i], p);
          Json row{{"point", i}, {"p", p}, {"ell1_part", number(dec.ell1_part)},
                   {"tail_l2", number(dec.tail_l2)}, {"proxy", number(dec.proxy)}};
          if (pts[i].dim() <= c.d_max) {
            const double e = bernoulli_norm_exact(pts[i], pd, c.d_max);
            const bool ok = within(e, dec.proxy) && within(dec.proxy, 4.0 * e);
            violations += !ok;
            row["bernoulli_exact"] = number(e);
            row["sandwich_ok"] = ok;
          } else {
            row["bernoulli_exact"] = nullptr;
            row["sandwich_ok"] = nullptr;
          }
          row["gaussian_exact"] = number(gaussian_norm_exact(pts[i], pd));
          rows.push_back(std::move(row));
        }
      }
      Json config = base_config(c, false);
      config["p"] = p_list;
      config["conventions"] = conventions(c.d_max, c.tol);
      Output o;
      o.report = make_report("moments", config, inputs,
                             {{"rows", rows}, {"sandwich_violations", violations}});
      o.table = rows;
      o.code = violations ? kExitAssertion : kExitOk;
      return o;
    };
  });

  auto* sup = app.add_subcommand("sup", "expected supremum, exact or Monte Carlo");
  add_common(sup, c);
  sup->add_option("--set", set_path)->required()->check(CLI::ExistingFile);
  sup->add_option("--kind", kind_name, "bernoulli or gaussian")->capture_default_str();
  sup->add_flag("--exact", exact, "require exact enumeration");
  sup->callback([&] {
    action = [&] {
      const FiniteSet set = load_set(set_path);
      const ProcessKind kind = parse_process_kind(kind_name);
      SupEstimate est;
      if (kind == ProcessKind::Gaussian) {
        if (exact) throw ParameterError("--exact", "no exact method for the Gaussian process");
        est = mc_sup(kind, set, c.samples, Seed{c.seed});
      } else if (exact) {
        est = brute_force_bernoulli_sup(set, c.d_max);
      } else {
        est = bernoulli_sup(set.points(), c.samples, Seed{c.seed}, c.d_max);
      }
      Json config = base_config(c);
      config["kind"] = to_string(kind);
      config["exact"] = exact;
      config["conventions"] = conventions(c.d_max, c.tol);
      Output o;
      o.report = make_report("sup", config, Json::array({input_ref(set_path, set)}), to_json(est));
      return o;
    };
  });

  auto* gamma = app.add_subcommand("gamma", "greedy (and optionally exhaustive) chain bound");
  add_common(gamma, c);
  gamma->add_option("--set", set_path)->required()->check(CLI::ExistingFile);
  gamma->add_option("--model", model_name,
                    "gaussian|bernoulli-exact|bernoulli-proxy|mc-bernoulli|mc-gaussian")
      ->capture_default_str();
  gamma->add_flag("--exhaustive", exhaustive, "also search all admissible trees (|F| <= 5)");
  gamma->add_flag("--no-tree", no_tree, "omit partition trees from the report");
  gamma->callback([&] {
    action = [&] {
      const FiniteSet set = load_set(set_path);
      const MomentModel model = parse_model(model_name, c);
      const auto greedy = chain_bound(set, build_partition_greedy(set), model);
      Json result{{"greedy", to_json(greedy, !no_tree)}};
      if (exhaustive) {
        const auto best = exhaustive_gamma(set, model);
        result["exhaustive"] = to_json(best, !no_tree);
      }
      Json config = base_config(c);
      config["model"] = model_name;
      config["exhaustive"] = exhaustive;
      config["conventions"] = conventions(c.d_max, c.tol);
      Output o;
      o.report = make_report("gamma", config, Json::array({input_ref(set_path, set)}), result);
      return o;
    };
  });

  auto* t2 = app.add_subcommand("verify-t2", "check S_X(F) <= 4 * chain bound");
  add_common(t2, c);
  t2->add_option("--set", set_path)->required()->check(CLI::ExistingFile);
  t2->add_option("--kind", kind_name, "bernoulli or gaussian")->capture_default_str();
  t2->add_flag("--exact", exact, "require exact enumeration (Bernoulli)");
  t2->callback([&] {
    action = [&] {
      const FiniteSet set = load_set(set_path);
      const ProcessKind kind = parse_process_kind(kind_name);
      if (exact && kind == ProcessKind::Gaussian) {
        throw ParameterError("--exact", "no exact method for the Gaussian process");
      }
      if (exact && set.dim() > c.d_max) {
        throw CapacityError("dimension " + std::to_string(set.dim()) + " exceeds d_max " +
                            std::to_string(c.d_max) + "; drop --exact to use Monte Carlo");
      }
      const auto rep = verify_theorem2(set, kind, c.samples, Seed{c.seed}, c.d_max);
      Json config = base_config(c);
      config["kind"] = to_string(kind);
      config["exact"] = exact;
      config["conventions"] = conventions(c.d_max, c.tol);
      Output o;
      o.report = make_report("verify-t2", config, Json::array({input_ref(set_path, set)}), to_json(rep));
      o.code = rep.violation ? kExitAssertion : kExitOk;
      return o;
    };
  });

  auto* contract = app.add_subcommand("contract", "contraction condition, fitted C and suprema");
  add_common(contract, c);
  contract->add_option("--set", set_path)->required()->check(CLI::ExistingFile);
  auto* map_opt = contract->add_option("--map", map_spec, "abs | clamp[:lo:hi] | scale:c | soft:level");
  contract->add_option("--image", image_path, "image document with points and correspondence")
      ->check(CLI::ExistingFile)
      ->excludes(map_opt);
  contract->add_option("--p-max", p_max, "largest p checked (default: dim)");
  contract->add_option("--tol", c.tol)->capture_default_str();
  contract->add_option("--cap", cap)->capture_default_str();
  contract->callback([&] {
    action = [&] {
      const FiniteSet set = load_set(set_path);
      if (map_spec.empty() && image_path.empty()) throw ParameterError("--map/--image", "no map given");
      const MappedPair pair = image_path.empty()
                                  ? apply_coordinate_map(set, parse_coordinate_map(map_spec))
                                  : load_image(set, image_path);
      const std::size_t pm = p_max ? p_max : set.dim();
      const auto fit = fit_min_C(pair, pm, c.tol, cap);
      const auto at_one = check_condition(pair, 1.0, pm);
      const auto sup_cmp = compare_suprema(pair, c.samples, Seed{c.seed}, c.d_max);
      Json config = base_config(c);
      config["map"] = image_path.empty() ? Json(parse_coordinate_map(map_spec).describe()) : Json(nullptr);
      config["p_max"] = pm;
      config["tol"] = number(c.tol);
      config["cap"] = number(cap);
      config["conventions"] = conventions(c.d_max, c.tol);
      Json inputs = Json::array({input_ref(set_path, set)});
      if (!image_path.empty()) inputs.push_back({{"path", image_path}, {"points", pair.image().size()}});
      Output o;
      o.report = make_report("contract", config, inputs,
                             {{"fit", to_json(fit)},
                              {"condition_at_c1", to_json(at_one)},
                              {"suprema", to_json(sup_cmp)}});
      return o;
    };
  });

  auto* decompose = app.add_subcommand("decompose", "threshold-split decomposition sweep");
  add_common(decompose, c);
  decompose->add_option("--set", set_path)->required()->check(CLI::ExistingFile);
  decompose->add_flag("--per-point", per_point, "refine thresholds point by point");
  decompose->callback([&] {
    action = [&] {
      const FiniteSet set = load_set(set_path);
      DecompositionOptions opts{c.samples, Seed{c.seed}, c.d_max, per_point};
      const auto res = decompose_by_sweep(set, opts);
      const auto two = verify_two_sided(set, res);
      Json config = base_config(c);
      config["per_point"] = per_point;
      config["conventions"] = conventions(c.d_max, c.tol);
      Output o;
      Json result = to_json(res);
      o.table = result["grid"];
      result["two_sided"] = {{"lower", to_json(two.lower)}, {"upper", to_json(two.upper)}};
      o.report = make_report("decompose", config, Json::array({input_ref(set_path, set)}), result);
      return o;
    };
  });

  auto* ole = app.add_subcommand("oleszkiewicz", "weak and strong moment comparison of vector systems");
  add_common(ole, c);
  ole->add_option("--x", x_path, "vector system file")->required()->check(CLI::ExistingFile);
  ole->add_option("--y", y_path, "vector system file")->required()->check(CLI::ExistingFile);
  ole->add_option("--functionals", functionals, "random dual-ball functionals")->capture_default_str();
  ole->add_option("--p-max", p_max, "largest moment order (default: terms)");
  ole->add_option("--tol", c.tol)->capture_default_str();
  ole->callback([&] {
    action = [&] {
      const VectorSystem x = load_system(x_path);
      const VectorSystem y = load_system(y_path);
      const auto funcs = sample_functionals(x.ambient_dim(), x.norm(), functionals, Seed{c.seed});
      const std::size_t pm = p_max ? p_max : x.terms();
      const auto weak = weak_moment_constant(x, y, funcs, pm, c.d_max);
      const auto trimmed = check_ole6(x, y, funcs, pm, c.tol);
      const auto strong = strong_moment_ratio(x, y, c.samples, Seed{c.seed}, c.d_max);
      Json weak_j = to_json(weak);
      const auto f = funcs[weak.functional];
      weak_j["functional_coords"] = std::vector<double>(f.begin(), f.end());
      Json config = base_config(c);
      config["functionals"] = funcs.size();
      config["p_max"] = pm;
      config["tol"] = number(c.tol);
      config["conventions"] = conventions(c.d_max, c.tol);
      Json inputs = Json::array();
      for (const auto& [p, s] : {std::pair{x_path, &x}, std::pair{y_path, &y}}) {
        inputs.push_back({{"path", p}, {"terms", s->terms()}, {"ambient_dim", s->ambient_dim()},
                          {"norm", to_string(s->norm())},
                          {"hash", [&] {
                             std::ostringstream h;
                             h << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(format_system(*s));
                             return h.str();
                           }()}});
      }
      Output o;
      o.report = make_report("oleszkiewicz", config, inputs,
                             {{"weak", weak_j}, {"trimmed_condition", to_json(trimmed)}, {"strong", to_json(strong)}});
      return o;
    };
  });

  auto* suite = app.add_subcommand("suite", "run the acceptance criteria");
  suite->add_option("--seed", c.seed)->default_val(2026)->capture_default_str();
  suite->add_option("--only", only, "criterion ids")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
  suite->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  suite->add_option("--out", c.out, "output path (default: stdout)");
  suite->add_flag("--quiet", exact, "no progress lines");
  suite->callback([&] {
    action = [&] {
      const SuiteOptions opts{c.seed, only};
      const bool quiet = exact;
      const auto run = run_suite(opts, [&](const CriterionResult& r) {
        if (!quiet) {
          err << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " ("
              << r.summary << ")\n";
        }
      });
      Output o;
      o.report = run.report(opts);
      Json rows = Json::array();
      for (const auto& r : run.criteria) {
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary}});
      }
      o.table = rows;
      o.code = run.all_passed() ? kExitOk : kExitAssertion;
      return o;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    const CLI::App* bad = &app;
    for (const auto* s : app.get_subcommands()) bad = s;
    err << bad->help();
    return kExitUsage;
  }

  try {
    const Output o = action();
    if (!o.report.is_null()) emit(o, c, out);
    return o.code;
  } catch (const ParseError& e) {
    err << "error: " << e.location() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.field() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace canonproc::cli
