#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "canonproc/chaining.hpp"
#include "canonproc/contraction.hpp"
#include "canonproc/decomposition.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/oleszkiewicz.hpp"
#include "canonproc/reports.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "canonproc.report/1";
inline constexpr std::string_view kVersion = "0.1.0";

/// Finite doubles as numbers; infinities as the strings "inf" / "-inf".
Json number(double v);

Json to_json(const MomentDecomposition& d);
Json to_json(const MomentModel& m);
Json to_json(const SupEstimate& s);
Json to_json(const Quantity& q);
Json to_json(const ComparisonReport& r);
Json to_json(const PartitionTree& tree);
Json to_json(const ChainBound& bound, bool include_tree = true);
Json to_json(const ContractionReport& r);
Json to_json(const ConditionCheck& c);
Json to_json(const DecompositionResult& r);
Json to_json(const WeakMomentReport& r);

/// Reference to an input set: name, size, dim and content hash.
Json set_reference(const FiniteSet& set);

/// Conventions every report carries so results read without the source.
Json conventions(std::size_t d_max, double tol);

/// Self-describing report envelope.
Json make_report(std::string_view subcommand, Json config, Json inputs,
                 Json result);

}  // namespace canonproc
