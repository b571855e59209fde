#include "canonproc/serialize.hpp"

#include <cmath>

namespace canonproc {

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json to_json(const MomentDecomposition& d) {
  return {{"p", d.p},
          {"ell1_part", number(d.ell1_part)},
          {"tail_l2", number(d.tail_l2)},
          {"proxy", number(d.proxy)}};
}

Json to_json(const MomentModel& m) {
  Json j{{"kind", to_string(m.kind())}};
  if (m.kind() == MomentKind::BernoulliExact) j["d_max"] = m.d_max();
  if (m.kind() == MomentKind::MonteCarlo) {
    j["process"] = to_string(m.process());
    j["samples"] = m.samples();
    j["seed"] = m.seed().value;
  }
  return j;
}

Json to_json(const SupEstimate& s) {
  Json j{{"value", number(s.value)},
         {"stderr", number(s.std_error)},
         {"method", to_string(s.method)},
         {"samples", s.samples}};
  j["seed"] = s.seed ? Json(s.seed->value) : Json(nullptr);
  return j;
}

Json to_json(const Quantity& q) {
  return {{"name", q.name}, {"value", number(q.value)}, {"stderr", number(q.std_error)}};
}

Json to_json(const ComparisonReport& r) {
  Json j{{"relation", r.relation},
         {"numerator", to_json(r.numerator)},
         {"denominator", to_json(r.denominator)},
         {"ratio", number(r.ratio)},
         {"ratio_stderr", number(r.ratio_std_error)}};
  j["constant"] = r.constant ? number(*r.constant) : Json(nullptr);
  j["violation"] = r.violation;
  return j;
}

Json to_json(const PartitionTree& tree) {
  Json levels = Json::array();
  for (const auto& level : tree.levels()) {
    Json blocks = Json::array();
    for (const auto& b : level) {
      Json jb{{"members", b.members}, {"representative", b.representative}};
      jb["parent"] = b.parent == Block::npos ? Json(nullptr) : Json(b.parent);
      blocks.push_back(std::move(jb));
    }
    levels.push_back(std::move(blocks));
  }
  return {{"set_size", tree.set_size()}, {"depth", tree.depth()}, {"levels", levels}};
}

Json to_json(const ChainBound& bound, bool include_tree) {
  Json sums = Json::array();
  for (double s : bound.per_point_sums) sums.push_back(number(s));
  Json j{{"value", number(bound.value)},
         {"model", to_json(bound.model)},
         {"per_point_sums", sums}};
  if (include_tree) j["tree"] = to_json(bound.tree);
  return j;
}

Json to_json(const ContractionReport& r) {
  Json j;
  j["c_star"] = r.c_star ? number(*r.c_star) : Json("infeasible");
  j["p_max"] = r.p_max;
  j["worst_pair"] = {{"first", r.worst.first}, {"second", r.worst.second}, {"p", r.worst.p}};
  j["margin"] = number(r.margin);
  j["tol"] = number(r.tolerance);
  j["cap"] = number(r.cap);
  j["budget_rule"] = r.budget_rule;
  return j;
}

Json to_json(const ConditionCheck& c) {
  return {{"holds", c.holds},
          {"margin", number(c.margin)},
          {"worst_pair", {{"first", c.worst.first}, {"second", c.worst.second}, {"p", c.worst.p}}}};
}

Json to_json(const DecompositionResult& r) {
  Json thresholds = Json::array();
  for (double t : r.split.thresholds) thresholds.push_back(number(t));
  Json splits = Json::array();
  for (const auto& s : r.point_splits) {
    splits.push_back({{"head_indices", s.head_indices}, {"tail_indices", s.tail_indices}});
  }
  Json grid = Json::array();
  for (const auto& g : r.grid) {
    grid.push_back({{"threshold", number(g.threshold)},
                    {"ell1_sup", number(g.ell1_sup)},
                    {"gamma2_bound", number(g.gamma2_bound)},
                    {"objective", number(g.objective)}});
  }
  return {{"rule", r.split.per_point() ? "per_point" : "global"},
          {"thresholds", thresholds},
          {"point_splits", splits},
          {"ell1_sup", number(r.ell1_sup)},
          {"gamma2_bound", number(r.gamma2_bound)},
          {"objective", number(r.objective)},
          {"s_b_reference", to_json(r.s_b_reference)},
          {"k_emp", number(r.k_emp)},
          {"grid", grid}};
}

Json to_json(const WeakMomentReport& r) {
  return {{"constant", number(r.value)},
          {"functional", r.functional},
          {"p", r.p},
          {"evaluated_pairs", r.evaluated}};
}

Json set_reference(const FiniteSet& set) {
  return {{"name", set.name()},
          {"size", set.size()},
          {"dim", set.dim()},
          {"hash", set.content_hash()}};
}

Json conventions(std::size_t d_max, double tol) {
  return {{"budget_rule", "floor(C*p)"},
          {"d_max", d_max},
          {"tol", number(tol)},
          {"confidence", "3*stderr"},
          {"condition_rounding_slack", number(kConditionRoundingSlack)},
          {"rng", "philox4x32-10 keyed by (seed, label, index)"},
          {"gaussian_moment", "(E|g|^p)^(1/p) from the Gamma function"},
          {"ratio_zero_over_zero", 0}};
}

Json make_report(std::string_view subcommand, Json config, Json inputs, Json result) {
  return {{"schema", kReportSchema},
          {"version", kVersion},
          {"subcommand", subcommand},
          {"config", std::move(config)},
          {"inputs", std::move(inputs)},
          {"result", std::move(result)}};
}

}  // namespace canonproc
