#include "shadowlab/serialization.hpp"

#include <sstream>

namespace shadowlab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::parse, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::parse, std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<Rational> rational_list(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json rational_list_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

Json constants_json(const std::map<std::string, Rational>& m) {
  Json o = Json::object();
  for (const auto& [k, v] : m) o[k] = to_json(v);
  return o;
}

Json report_json(const DeviationReport& r) {
  return {{"maxDeviation", to_json(r.max_deviation)},
          {"perStep", rational_list_json(r.per_step)},
          {"exactHit", r.exact_hit}};
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(ErrorCode::parse, "expected a rational string \"p/q\", got " + j.dump());
}

Json to_json(const ClosedInterval& iv) { return Json::array({to_json(iv.lo), to_json(iv.hi)}); }

Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& p : s.parts()) a.push_back(to_json(p));
  return a;
}

IntervalSet interval_set_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse, "interval set must be an array of [lo, hi] pairs");
  std::vector<ClosedInterval> parts;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::parse, "interval must be a [lo, hi] pair");
    Rational lo = rational_from_json(e[0]), hi = rational_from_json(e[1]);
    if (hi < lo) throw Error(ErrorCode::parse, "interval with lo > hi");
    parts.emplace_back(lo, hi);
  }
  return IntervalSet::normalize(std::move(parts));
}

Json system_to_json(const System& s) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s))
    return {{"kind", "pl"}, {"breakpoints", rational_list_json(f->breakpoints())}, {"values", rational_list_json(f->values())}};
  if (auto* q = std::get_if<QuadraticMap>(&s))
    return {{"kind", q->family() == QuadraticFamily::logistic ? "logistic" : "quadratic"},
            {"parameter", to_json(q->parameter())}};
  if (auto* c = std::get_if<CantorSystem>(&s)) return {{"kind", "cantor"}, {"depth", c->depth()}};
  if (auto* sh = std::get_if<ShiftSystem>(&s)) {
    Json alpha = Json::array();
    for (char a : sh->alphabet()) alpha.push_back(std::string(1, a));
    return {{"kind", "sft"}, {"alphabet", alpha}, {"forbidden", sh->forbidden()}};
  }
  if (auto* od = std::get_if<OdometerSystem>(&s)) return {{"kind", "odometer"}, {"depth", od->depth()}};
  const auto& sl = std::get<SLimitSystem>(s);
  return {{"kind", "slimit"}, {"depth", sl.tail_depth()}};
}

System system_from_json(const Json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "pl") return PiecewiseLinearMap(rational_list(field(j, "breakpoints")), rational_list(field(j, "values")));
  if (kind == "tent") return tent_map(rational_from_json(field(j, "lambda")));
  if (kind == "quadratic" || kind == "logistic") {
    Rational p = rational_from_json(j.contains("parameter") ? j.at("parameter")
                                                            : field(j, kind == "logistic" ? "lambda" : "mu"));
    return QuadraticMap(kind == "logistic" ? QuadraticFamily::logistic : QuadraticFamily::quadratic, p);
  }
  if (kind == "cantor") return CantorSystem(j.contains("depth") ? int_field(j, "depth") : 6);
  if (kind == "sft") {
    std::string alphabet;
    for (const auto& a : field(j, "alphabet")) {
      auto t = a.get<std::string>();
      if (t.size() != 1) throw Error(ErrorCode::parse, "alphabet symbols must be single characters");
      alphabet += t;
    }
    std::vector<std::string> forbidden;
    if (j.contains("forbidden"))
      for (const auto& w : j.at("forbidden")) forbidden.push_back(w.get<std::string>());
    return ShiftSystem(alphabet, forbidden);
  }
  if (kind == "odometer") return OdometerSystem(int_field(j, "depth"));
  if (kind == "slimit") return SLimitSystem(j.contains("depth") ? int_field(j, "depth") : 64);
  throw Error(ErrorCode::parse, "unknown system kind \"" + kind + "\"");
}

Json point_to_json(const Point& p) {
  if (auto* r = std::get_if<Rational>(&p)) return to_json(*r);
  return std::get<SymbolWord>(p).str();
}

Point point_from_json(const System& s, const Json& j) {
  Point p;
  if (is_symbolic(s)) {
    if (!j.is_string()) throw Error(ErrorCode::parse, "symbolic points are strings");
    p = SymbolWord::parse(j.get<std::string>());
  } else {
    p = rational_from_json(j);
  }
  if (!in_space(s, p)) throw Error(ErrorCode::domain, "point " + point_str(p) + " outside the space");
  return p;
}

Json orbit_to_json(const PseudoOrbit& o) {
  Json pts = Json::array();
  for (const auto& p : o.points) pts.push_back(point_to_json(p));
  Json j = {{"points", pts}};
  j["claimedDelta"] = o.claimed_delta ? to_json(*o.claimed_delta) : Json(nullptr);
  j["schedule"] = o.schedule ? Json{{"scale", to_json(o.schedule->scale)}} : Json(nullptr);
  return j;
}

PseudoOrbit orbit_from_json(const System& s, const Json& j) {
  PseudoOrbit o;
  const Json& pts = j.is_array() ? j : field(j, "points");
  for (const auto& e : pts) o.points.push_back(point_from_json(s, e));
  if (o.points.empty()) throw Error(ErrorCode::parse, "pseudo-orbit has no points");
  if (j.is_object()) {
    if (j.contains("claimedDelta") && !j.at("claimedDelta").is_null()) o.claimed_delta = rational_from_json(j.at("claimedDelta"));
    if (j.contains("schedule") && !j.at("schedule").is_null())
      o.schedule = DecaySchedule{rational_from_json(field(j.at("schedule"), "scale"))};
  }
  return o;
}

std::string orbit_to_csv(const PseudoOrbit& o) {
  std::string out = "point\n";
  for (const auto& p : o.points) out += point_str(p) + "\n";
  return out;
}

PseudoOrbit orbit_from_csv(const System& s, std::string_view text) {
  PseudoOrbit o;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "point") {
      first = false;
      continue;
    }
    first = false;
    o.points.push_back(point_from_json(s, Json(line)));
  }
  if (o.points.empty()) throw Error(ErrorCode::parse, "pseudo-orbit CSV has no points");
  return o;
}

Json certificate_to_json(const ShadowCertificate& c) {
  Json j = {{"verdict", tri_name(c.verdict)},
            {"feasible", to_json(c.feasible)},
            {"constants", constants_json(c.constants)},
            {"precisionUsed", c.precision_used},
            {"note", c.note}};
  if (!c.feasible_description.empty()) j["feasibleDescription"] = c.feasible_description;
  j["witness"] = c.witness ? point_to_json(*c.witness) : Json(nullptr);
  if (c.witness_enclosure) j["witnessEnclosure"] = to_json(*c.witness_enclosure);
  j["report"] = c.report ? report_json(*c.report) : Json(nullptr);
  if (!c.transcript.empty()) {
    Json t = Json::array();
    for (const auto& s : c.transcript) t.push_back(to_json(s));
    j["transcript"] = t;
  }
  return j;
}

Json verdict_to_json(const System& s, const ExpansivityVerdict& v) {
  Json j = {{"property", property_name(v.property)},
            {"holds", holds_name(v.holds)},
            {"constants", constants_json(v.constants)},
            {"detail", v.detail}};
  if (!v.counterexample) {
    j["counterexample"] = nullptr;
    return j;
  }
  const auto& [x, y] = *v.counterexample;
  Json cx = {{"x", point_to_json(x)}, {"y", point_to_json(y)}};
  if (v.violating_quantity) cx["quantity"] = to_json(*v.violating_quantity);
  auto mu = v.constants.find("mu");
  if ((v.property == Property::expanding || v.property == Property::star) && mu != v.constants.end()) {
    Rational lhs = distance(s, eval(s, x), eval(s, y));
    Rational rhs = mu->second * distance(s, x, y);
    cx["inequality"] = {{"lhs", to_json(lhs)}, {"relation", "<"}, {"rhs", to_json(rhs)},
                        {"text", "d(f(x),f(y)) < mu d(x,y)"}};
  } else if (v.property == Property::ball_expanding && mu != v.constants.end()) {
    const Rational& eps = v.constants.at("counter_epsilon");
    Rational lhs = abs(as_rational(y) - as_rational(eval(s, x)));
    cx["inequality"] = {{"lhs", to_json(lhs)}, {"relation", "<="}, {"rhs", to_json(mu->second * eps)},
                        {"text", "z = y lies within mu eps of f(x) but outside f(closed ball(x, eps))"}};
  } else if (v.property == Property::positively_expansive || v.property == Property::locally_injective) {
    cx["distance"] = to_json(distance(s, x, y));
  }
  j["counterexample"] = cx;
  return j;
}

Json theorem25_to_json(const System& s, const Theorem25Report& r) {
  return {{"neighbourhood", to_json(r.neighbourhood.carrier)},
          {"margin", to_json(r.neighbourhood.margin)},
          {"open", verdict_to_json(s, r.open_on)},
          {"expanding", verdict_to_json(s, r.expanding)},
          {"ballExpanding", verdict_to_json(s, r.ball_expanding)},
          {"locallyInjective", verdict_to_json(s, r.locally_injective)},
          {"side1", holds_name(r.side1)},
          {"side2", holds_name(r.side2)},
          {"consistent", r.consistent}};
}

Json staged_to_json(const StagedShadowLog& log) {
  Json pts = Json::array();
  for (const auto& p : log.stage_points) pts.push_back(point_to_json(p));
  Json checks = Json::array();
  for (const auto& c : log.condition_checks) checks.push_back({c[0], c[1], c[2], c[3]});
  return {{"stagePoints", pts},
          {"stageHorizons", log.stage_horizons},
          {"stageBounds", rational_list_json(log.stage_bounds)},
          {"stageDeltas", rational_list_json(log.stage_deltas)},
          {"conditions", checks},
          {"failedStage", log.failed_stage ? Json(*log.failed_stage) : Json(nullptr)},
          {"terminalDeviation", to_json(log.terminal_deviation)},
          {"truncationHorizon", log.truncation_horizon},
          {"complete", log.complete()},
          {"note", log.note}};
}

Json nonshadow_to_json(const NonShadowWitness& w) {
  return {{"lambda", to_json(w.lambda)},
          {"epsilon", to_json(w.epsilon)},
          {"delta", to_json(w.delta)},
          {"recurrenceHorizon", w.recurrence_horizon},
          {"recurrenceGap", to_json(w.recurrence_gap)},
          {"side", w.side},
          {"orbitLength", w.orbit_length},
          {"orbit", orbit_to_json(w.orbit)},
          {"certificate", certificate_to_json(w.certificate)}};
}

Json slimit_to_json(const SLimitCheck& c) {
  return {{"n", c.n},
          {"epsilon", to_json(c.epsilon)},
          {"delta", to_json(c.delta)},
          {"gamma", orbit_to_json(c.gamma)},
          {"maxJump", to_json(c.max_jump)},
          {"isPseudoOrbit", c.is_pseudo_orbit},
          {"tailUnique", c.tail_unique},
          {"step0Deviation", to_json(c.step0_deviation)},
          {"maxDeviation", to_json(c.max_deviation)},
          {"deviationExceeds", c.deviation_exceeds},
          {"horizon", c.horizon},
          {"passed", c.passed()}};
}

Json kneading_to_json(const KneadingWord& w) {
  return {{"symbols", w.symbols}, {"horizon", w.horizon}, {"undetermined", w.undetermined}};
}

Json parameter_search_to_json(const ParameterSearch& p) {
  return {{"mu", to_json(p.mu)},
          {"bracket", Json::array({to_json(p.lo), to_json(p.hi)})},
          {"bracketWidth", to_json(p.hi - p.lo)},
          {"achieved", kneading_to_json(p.achieved)},
          {"matched", p.matched},
          {"steps", p.steps},
          {"note", p.note}};
}

Json eps_net_to_json(const EpsNetResult& r) {
  return {{"isNet", r.is_net},
          {"maxGap", to_json(r.max_gap)},
          {"points", r.points},
          {"complete", r.complete},
          {"enclosure", r.enclosure}};
}

}  // namespace shadowlab
