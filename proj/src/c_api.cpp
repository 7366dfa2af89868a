#include "shadowlab.h"

#include <cstdlib>
#include <cstring>

#include "shadowlab/scenarios.hpp"

using namespace shadowlab;

struct sl_system {
  System sys;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Json parse_json(const char* text, const char* what) {
  if (!text) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string(what) + ": " + e.what());
  }
}

Rational parse_rational(const char* text, const char* what) {
  if (!text) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
  return Rational::parse(text);
}

template <class F>
sl_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return SL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<sl_status>(static_cast<int>(e.code()));
  } catch (const Json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return SL_PARSE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SL_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

SolveOptions solve_options(const char* options_json) {
  SolveOptions opt;
  if (!options_json) return opt;
  Json j = parse_json(options_json, "options");
  opt.transcript = j.value("transcript", false);
  opt.precision = j.value("precision", opt.precision);
  opt.max_precision = j.value("maxPrecision", std::max(opt.max_precision, opt.precision));
  return opt;
}

Rational req_rational(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::invalid_argument, std::string("request needs \"") + key + "\"");
  return rational_from_json(j.at(key));
}

RegionSpec region_of(const System& s, const Json& j) {
  Rational margin = j.contains("margin") ? rational_from_json(j.at("margin")) : Rational(0);
  if (j.contains("points")) {
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from_json(s, p));
    RegionSpec r = RegionSpec::of_points(std::move(pts));
    r.margin = margin;
    return r;
  }
  if (j.contains("region")) return RegionSpec::of(interval_set_from_json(j.at("region")), margin);
  if (is_symbolic(s)) throw Error(ErrorCode::invalid_argument, "symbolic systems need \"points\"");
  ClosedInterval h = space_hull(s);
  return RegionSpec::interval(h.lo, h.hi, margin);
}

Property property_of(const std::string& name) {
  for (Property p : {Property::expanding, Property::star, Property::ball_expanding, Property::open_on,
                     Property::locally_injective, Property::positively_expansive})
    if (property_name(p) == name) return p;
  throw Error(ErrorCode::invalid_argument, "unknown property \"" + name + "\"");
}

}  // namespace

extern "C" {

const char* sl_version(void) { return "0.1.0"; }

const char* sl_last_error_message(void) { return last_error.c_str(); }

void sl_string_free(char* s) { std::free(s); }

sl_status sl_system_create(const char* spec_json, sl_system** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    Json j = parse_json(spec_json, "system spec");
    *out = new sl_system{system_from_json(j)};
  });
}

void sl_system_free(sl_system* s) { delete s; }

sl_status sl_system_describe(const sl_system* s, char** out_json) {
  return guard([&] {
    need(s, "system");
    need(out_json, "out");
    *out_json = dup(system_to_json(s->sys).dump());
  });
}

sl_status sl_shadow_oracle(const sl_system* s, const char* orbit_json, const char* epsilon, const char* options_json,
                           char** out_json) {
  return guard([&] {
    need(s, "system");
    need(out_json, "out");
    PseudoOrbit o = orbit_from_json(s->sys, parse_json(orbit_json, "orbit"));
    auto cert = shadow_oracle(s->sys, o, parse_rational(epsilon, "epsilon"), solve_options(options_json));
    *out_json = dup(certificate_to_json(cert).dump());
  });
}

sl_status sl_h_shadow_solve(const sl_system* s, const char* orbit_json, const char* epsilon, const char* options_json,
                            char** out_json) {
  return guard([&] {
    need(s, "system");
    need(out_json, "out");
    PseudoOrbit o = orbit_from_json(s->sys, parse_json(orbit_json, "orbit"));
    auto cert = h_shadow_solve(s->sys, o, parse_rational(epsilon, "epsilon"), solve_options(options_json));
    *out_json = dup(certificate_to_json(cert).dump());
  });
}

sl_status sl_expansivity_check(const sl_system* s, const char* request_json, char** out_json) {
  return guard([&] {
    need(s, "system");
    need(out_json, "out");
    Json j = parse_json(request_json, "request");
    std::string prop = j.value("property", std::string());
    std::uint64_t seed = j.value("seed", std::uint64_t{0});
    const System& sys = s->sys;
    if (prop == "theorem25") {
      RegionSpec region = region_of(sys, j);
      std::optional<Rational> margin;
      if (j.contains("margin")) margin = rational_from_json(j.at("margin"));
      *out_json = dup(theorem25_to_json(sys, theorem25_crosscheck(sys, region, margin)).dump());
      return;
    }
    ExpansivityVerdict v;
    switch (property_of(prop)) {
      case Property::expanding:
        v = check_expanding(sys, region_of(sys, j), req_rational(j, "delta"), req_rational(j, "mu"), seed);
        break;
      case Property::star:
        v = check_star(sys, region_of(sys, j), req_rational(j, "delta"), req_rational(j, "mu"), seed);
        break;
      case Property::ball_expanding: {
        std::vector<Rational> grid;
        if (j.contains("epsGrid"))
          for (const auto& e : j.at("epsGrid")) grid.push_back(rational_from_json(e));
        Rational nu = req_rational(j, "nu");
        if (grid.empty())
          for (int k = 1; k <= 16; ++k) grid.push_back(nu * Rational(k, 17));
        v = check_ball_expanding(sys, region_of(sys, j), req_rational(j, "mu"), nu, grid, seed);
        break;
      }
      case Property::open_on:
        v = check_open_on(sys, region_of(sys, j));
        break;
      case Property::locally_injective:
        v = check_locally_injective(sys, region_of(sys, j));
        break;
      case Property::positively_expansive: {
        Rational b = req_rational(j, "b");
        if (auto* sh = std::get_if<ShiftSystem>(&sys); sh && j.value("certify", false))
          v = certify_shift_positive_expansivity(*sh, b);
        else
          v = positively_expansive_falsify(sys, b, j.value("horizon", 64), seed);
        break;
      }
    }
    *out_json = dup(verdict_to_json(sys, v).dump());
  });
}

sl_status sl_kneading_search(const char* request_json, char** out_json) {
  return guard([&] {
    need(out_json, "out");
    Json j = parse_json(request_json, "request");
    int horizon = j.value("horizon", 15);
    std::string target = j.contains("target") ? j.at("target").get<std::string>()
                                              : k_prefix(static_cast<std::size_t>(j.value("targetLength", 300)));
    ItineraryOptions opt;
    if (j.contains("precision")) opt.max_precision = std::max(opt.precision, j.at("precision").get<unsigned>());
    auto ps = find_parameter(target, horizon, j.value("steps", 300), opt);
    Json out = parameter_search_to_json(ps);
    out["target"] = target;
    *out_json = dup(out.dump());
  });
}

sl_status sl_scenario_run(const char* name, const char* params_json, char** out_report_json) {
  return guard([&] {
    need(name, "name");
    need(out_report_json, "out");
    ScenarioParams p;
    if (params_json) {
      Json j = parse_json(params_json, "params");
      p.seed = j.value("seed", p.seed);
      p.precision = j.value("precision", p.precision);
      if (j.contains("depth")) p.depth = j.at("depth").get<int>();
      if (j.contains("trials")) p.trials = j.at("trials").get<int>();
      if (j.contains("extras"))
        for (const auto& [k, v] : j.at("extras").items()) p.extras[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    *out_report_json = dup(report_to_json(run_scenario(name, p)).dump());
  });
}

sl_status sl_scenario_list(char** out_json) {
  return guard([&] {
    need(out_json, "out");
    Json a = Json::array();
    for (const auto& sc : scenario_registry())
      a.push_back({{"name", sc.name}, {"description", sc.description}, {"extras", sc.extra_keys}});
    *out_json = dup(a.dump());
  });
}

sl_status sl_report_emit(const char* report_json, const char* format, const char* path) {
  return guard([&] {
    need(format, "format");
    need(path, "path");
    Report r = report_from_json(parse_json(report_json, "report"));
    if (std::find(r.artifacts.begin(), r.artifacts.end(), path) == r.artifacts.end()) r.artifacts.push_back(path);
    emit(r, format_from_string(format), path);
  });
}

}  // extern "C"
