// Command-line front end over the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "shadowlab.h"

using Json = nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

void check(sl_status st) {
  if (st != SL_OK) throw Failure{static_cast<int>(st), sl_last_error_message()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sl_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SL_IO, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// CSV orbits become a bare JSON array of point strings.
std::string orbit_text(const std::string& path) {
  std::string text = read_file(path);
  if (!ends_with(path, ".csv")) return text;
  Json pts = Json::array();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "point") continue;
    pts.push_back(line);
  }
  return pts.dump();
}

struct SystemHandle {
  sl_system* h = nullptr;
  explicit SystemHandle(const std::string& spec) { check(sl_system_create(spec.c_str(), &h)); }
  ~SystemHandle() { sl_system_free(h); }
  SystemHandle(const SystemHandle&) = delete;
  SystemHandle& operator=(const SystemHandle&) = delete;
};

// A system argument is either a path to a JSON file or inline JSON.
std::string system_text(const std::string& arg) {
  return !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{SL_IO, "cannot write " + path};
  out << text << "\n";
}

int report_exit(const Json& report) {
  std::string st = report.at("status").get<std::string>();
  return st == "pass" ? 0 : (st == "fail" ? 1 : 2);
}

void print_report(const Json& report) {
  for (const auto& c : report.at("checks"))
    std::cout << "[" << c.at("status").get<std::string>() << "] " << c.at("label").get<std::string>()
              << ": expected " << c.at("expected").get<std::string>() << ", got "
              << c.at("actual").get<std::string>() << " (" << c.at("provenance").get<std::string>() << ")\n";
  std::cout << report.at("name").get<std::string>() << ": " << report.at("status").get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadowlab: shadowing and expansivity with exact rationals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sl_version()));

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Run registered scenarios");
  scenario->require_subcommand(1);
  auto* sc_list = scenario->add_subcommand("list", "List scenarios");
  auto* sc_run = scenario->add_subcommand("run", "Run one scenario");
  std::string sc_name, sc_out, sc_format;
  std::uint64_t seed = 7;
  unsigned precision = 1024;
  int depth = 0, trials = 0;
  std::vector<std::string> sets;
  sc_run->add_option("name", sc_name, "Scenario name")->required();
  sc_run->add_option("--seed", seed, "Random seed")->capture_default_str();
  sc_run->add_option("--precision", precision, "Enclosure bit cap")->capture_default_str();
  auto* depth_opt = sc_run->add_option("--depth", depth, "Cantor or odometer truncation depth");
  auto* trials_opt = sc_run->add_option("--trials", trials, "Number of trials");
  sc_run->add_option("--out", sc_out, "Write the report here");
  sc_run->add_option("--format", sc_format, "json or csv (default from the --out extension)")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_run->add_option("--set", sets, "Scenario parameter key=value (repeatable)");

  // shadow
  auto* shadow = app.add_subcommand("shadow", "Shadowing oracle and h-shadowing solver");
  shadow->require_subcommand(1);
  std::string sys_arg, orbit_path, epsilon, out_path;
  bool transcript = false;
  unsigned max_prec = 1024;
  auto add_shadow = [&](const char* name, const char* desc) {
    auto* c = shadow->add_subcommand(name, desc);
    c->add_option("--system", sys_arg, "System JSON file or inline JSON")->required();
    c->add_option("--orbit", orbit_path, "Pseudo-orbit as JSON or CSV")->required()->check(CLI::ExistingFile);
    c->add_option("--epsilon", epsilon, "Tolerance p/q")->required();
    c->add_flag("--transcript", transcript, "Include the feasible-set transcript");
    c->add_option("--precision", max_prec, "Enclosure bit cap for quadratic maps")->capture_default_str();
    c->add_option("--out", out_path, "Write the certificate here");
    return c;
  };
  auto* sh_solve = add_shadow("solve", "Exact-hit shadowing");
  auto* sh_oracle = add_shadow("oracle", "Closed-tube shadowing");

  // expansivity
  auto* expans = app.add_subcommand("expansivity", "Expansivity certifiers");
  expans->require_subcommand(1);
  auto* ex_check = expans->add_subcommand("check", "Check one property");
  std::string property, region, points, delta, mu, nu, b, margin;
  std::vector<std::string> grid;
  int horizon = 64;
  std::uint64_t ex_seed = 0;
  ex_check->add_option("--system", sys_arg, "System JSON file or inline JSON")->required();
  ex_check->add_option("--property", property,
                       "expanding, star, ball_expanding, open_on, locally_injective, positively_expansive, theorem25")
      ->required();
  ex_check->add_option("--region", region, "Interval set as JSON, e.g. [[\"0\",\"1\"]]");
  ex_check->add_option("--points", points, "Symbolic points as a JSON array");
  ex_check->add_option("--delta", delta);
  ex_check->add_option("--mu", mu);
  ex_check->add_option("--nu", nu);
  ex_check->add_option("--eps", grid, "Epsilon grid values (repeatable)");
  ex_check->add_option("--b", b, "Expansivity constant");
  ex_check->add_option("--margin", margin);
  ex_check->add_option("--horizon", horizon)->capture_default_str();
  ex_check->add_option("--seed", ex_seed)->capture_default_str();
  ex_check->add_option("--out", out_path);

  // kneading
  auto* kneading = app.add_subcommand("kneading", "Kneading parameter search");
  kneading->require_subcommand(1);
  auto* kn_search = kneading->add_subcommand("search", "Find mu whose kneading word matches a target");
  std::string target;
  int target_len = 300, kn_horizon = 15, steps = 300;
  kn_search->add_option("--target", target, "Target word over L, C, R (default: a prefix of K)");
  kn_search->add_option("--length", target_len, "Length of the K prefix used as target")->capture_default_str();
  kn_search->add_option("--horizon", kn_horizon)->capture_default_str();
  kn_search->add_option("--steps", steps, "Bisection steps")->capture_default_str();
  kn_search->add_option("--precision", max_prec)->capture_default_str();
  kn_search->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sc_list) {
      char* out = nullptr;
      check(sl_scenario_list(&out));
      for (const auto& s : Json::parse(take(out)))
        std::cout << s.at("name").get<std::string>() << "  " << s.at("description").get<std::string>() << "\n";
      return 0;
    }
    if (*sc_run) {
      Json params = {{"seed", seed}, {"precision", precision}};
      if (*depth_opt) params["depth"] = depth;
      if (*trials_opt) params["trials"] = trials;
      Json extras = Json::object();
      for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Failure{SL_INVALID_ARGUMENT, "--set expects key=value, got " + kv};
        extras[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      params["extras"] = extras;
      char* out = nullptr;
      check(sl_scenario_run(sc_name.c_str(), params.dump().c_str(), &out));
      std::string text = take(out);
      Json report = Json::parse(text);
      if (!sc_out.empty()) {
        std::string fmt = !sc_format.empty() ? sc_format : (ends_with(sc_out, ".csv") ? "csv" : "json");
        check(sl_report_emit(text.c_str(), fmt.c_str(), sc_out.c_str()));
      }
      print_report(report);
      return report_exit(report);
    }
    if (*sh_solve || *sh_oracle) {
      SystemHandle sys(system_text(sys_arg));
      Json opts = {{"transcript", transcript}, {"maxPrecision", max_prec}};
      std::string orbit = orbit_text(orbit_path);
      char* out = nullptr;
      auto fn = *sh_solve ? sl_h_shadow_solve : sl_shadow_oracle;
      check(fn(sys.h, orbit.c_str(), epsilon.c_str(), opts.dump().c_str(), &out));
      std::string text = take(out);
      write_out(Json::parse(text).dump(2), out_path);
      return Json::parse(text).at("verdict") == "no" ? 1 : 0;
    }
    if (*ex_check) {
      SystemHandle sys(system_text(sys_arg));
      Json req = {{"property", property}, {"horizon", horizon}, {"seed", ex_seed}};
      if (!region.empty()) req["region"] = Json::parse(region);
      if (!points.empty()) req["points"] = Json::parse(points);
      for (auto [k, v] : {std::pair{"delta", &delta}, {"mu", &mu}, {"nu", &nu}, {"b", &b}, {"margin", &margin}})
        if (!v->empty()) req[k] = *v;
      if (!grid.empty()) req["epsGrid"] = grid;
      char* out = nullptr;
      check(sl_expansivity_check(sys.h, req.dump().c_str(), &out));
      write_out(Json::parse(take(out)).dump(2), out_path);
      return 0;
    }
    if (*kn_search) {
      Json req = {{"horizon", kn_horizon}, {"steps", steps}, {"precision", max_prec}};
      if (!target.empty()) req["target"] = target;
      else req["targetLength"] = target_len;
      char* out = nullptr;
      check(sl_kneading_search(req.dump().c_str(), &out));
      Json res = Json::parse(take(out));
      write_out(res.dump(2), out_path);
      return res.at("matched").get<bool>() ? 0 : 1;
    }
  } catch (const Failure& f) {
    std::cerr << "shadowlab: " << f.message << "\n";
    return 10 + f.code;
  } catch (const Json::exception& e) {
    std::cerr << "shadowlab: malformed JSON argument: " << e.what() << "\n";
    return 10 + SL_PARSE;
  }
  return 0;
}
