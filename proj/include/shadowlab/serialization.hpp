#pragma once

// JSON and CSV forms of systems, points, pseudo-orbits and results. Rationals
// are "p/q" strings; object keys come out sorted, so equal inputs give equal
// bytes.

#include <json.hpp>
#include <string>
#include <string_view>

#include "shadowlab/expansivity.hpp"
#include "shadowlab/kneading.hpp"
#include "shadowlab/shadowing.hpp"

namespace shadowlab {

using Json = nlohmann::json;

Json to_json(const Rational& r);
/// Accepts "p/q", "p" or a JSON integer.
Rational rational_from_json(const Json& j);

Json to_json(const ClosedInterval& iv);
Json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const Json& j);

/// {"kind": "pl" | "tent" | "quadratic" | "logistic" | "cantor" | "sft" | "odometer" | "slimit", ...}
Json system_to_json(const System& s);
System system_from_json(const Json& j);

Json point_to_json(const Point& p);
Point point_from_json(const System& s, const Json& j);

Json orbit_to_json(const PseudoOrbit& o);
PseudoOrbit orbit_from_json(const System& s, const Json& j);
/// One point per row.
std::string orbit_to_csv(const PseudoOrbit& o);
PseudoOrbit orbit_from_csv(const System& s, std::string_view text);

Json certificate_to_json(const ShadowCertificate& c);
Json verdict_to_json(const System& s, const ExpansivityVerdict& v);
Json theorem25_to_json(const System& s, const Theorem25Report& r);
Json staged_to_json(const StagedShadowLog& log);
Json nonshadow_to_json(const NonShadowWitness& w);
Json slimit_to_json(const SLimitCheck& c);
Json kneading_to_json(const KneadingWord& w);
Json parameter_search_to_json(const ParameterSearch& p);
Json eps_net_to_json(const EpsNetResult& r);

}  // namespace shadowlab
