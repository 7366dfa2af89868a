#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "shadowlab/scenarios.hpp"

using namespace shadowlab;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

// Minimal CSV row splitter for the report format (quoted fields, "" escapes).
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') field += '"', ++i;
      else if (ch == '"') quoted = false;
      else field += ch;
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      rows.back().push_back(field);
      field.clear();
    } else if (ch == '\n') {
      rows.back().push_back(field);
      field.clear();
      rows.emplace_back();
    } else {
      field += ch;
    }
  }
  if (rows.back().empty()) rows.pop_back();
  return rows;
}
}  // namespace

TEST_CASE("report status") {
  Report r;
  CHECK(r.status() == Status::pass);
  r.expect("a", "1", "1", Provenance::trivial);
  CHECK(r.status() == Status::pass);
  r.add("b", "x", "?", Provenance::derived, Status::undetermined);
  CHECK(r.status() == Status::undetermined);
  r.expect("c", "1", "2", Provenance::published);
  CHECK(r.status() == Status::fail);
}

TEST_CASE("emit is byte-stable and formats agree") {
  ScenarioParams p;
  Report r = run_scenario("tent-ball-2.9", p);
  std::string a = tmp("shadowlab_emit_a.json"), b = tmp("shadowlab_emit_b.json"), c = tmp("shadowlab_emit.csv");
  emit(r, Format::json, a);
  emit(run_scenario("tent-ball-2.9", p), Format::json, b);
  CHECK(slurp(a) == slurp(b));
  emit(r, Format::csv, c);

  std::multiset<std::pair<std::string, std::string>> from_json, from_csv;
  Json parsed = Json::parse(slurp(a));
  for (const auto& ch : parsed["checks"]) from_json.emplace(ch["label"], ch["status"]);
  auto rows = parse_csv(slurp(c));
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"label", "status", "expected", "actual", "provenance"});
  for (std::size_t i = 1; i < rows.size(); ++i) from_csv.emplace(rows[i][0], rows[i][1]);
  CHECK(from_json == from_csv);
  CHECK(from_json.size() == r.checks.size());

  Report back = report_from_json(parsed);
  CHECK(report_to_json(back) == report_to_json(r));
}

TEST_CASE("empty report") {
  Report r;
  r.name = "empty";
  std::string j = tmp("shadowlab_empty.json"), c = tmp("shadowlab_empty.csv");
  emit(r, Format::json, j);
  emit(r, Format::csv, c);
  auto parsed = Json::parse(slurp(j));
  CHECK(parsed["checks"].empty());
  CHECK(parse_csv(slurp(c)).size() == 1);
  CHECK_THROWS_AS(emit(r, Format::json, "/nonexistent-dir/x.json"), Error);
  CHECK_THROWS_AS(format_from_string("xml"), Error);
}

TEST_CASE("registry") {
  std::set<std::string> names;
  for (const auto& s : scenario_registry()) names.insert(s.name);
  for (const char* n : {"cantor-2.8", "tent-ball-2.9", "slimit-3", "iterate-3.8", "hshadow-4.3", "pl-region-5.2",
                        "logistic-5.4", "kneading-5.6", "odometer-6.1", "sft-6.4"})
    CHECK(names.count(n) == 1);
  CHECK_THROWS_AS(run_scenario("no-such", {}), Error);
  ScenarioParams bad;
  bad.extras["bogus"] = "1";
  CHECK_THROWS_AS(run_scenario("slimit-3", bad), Error);
}

TEST_CASE("small scenarios pass") {
  for (const char* n : {"slimit-3", "tent-ball-2.9", "schwarzian-5.5", "pl-region-5.2"}) {
    ScenarioParams p;
    p.trials = 20;
    if (std::string(n) != "pl-region-5.2") p.trials.reset();
    CAPTURE(n);
    CHECK(run_scenario(n, p).status() == Status::pass);
  }
  ScenarioParams p;
  p.extras["delta"] = "1/100";
  Report r = run_scenario("slimit-3", p);
  CHECK(r.params.at("delta") == "1/100");
}

TEST_CASE("serialization round trips") {
  System s = system_from_json(Json::parse(R"({"kind":"tent","lambda":"9/5"})"));
  CHECK(system_to_json(system_from_json(system_to_json(s))) == system_to_json(s));
  CHECK(eval(s, Rational(1, 2)) == Rational(9, 10));
  System pl = system_from_json(Json::parse(R"({"kind":"pl","breakpoints":["0","1/2","1"],"values":["0","1","0"]})"));
  CHECK(eval(pl, Rational(1, 4)) == Rational(1, 2));
  System sft = system_from_json(Json::parse(R"({"kind":"sft","alphabet":["0","1"],"forbidden":["11"]})"));
  CHECK(std::get<ShiftSystem>(sft).contains(SymbolWord::parse("(01)")));
  CHECK_THROWS_AS(system_from_json(Json::parse(R"({"kind":"nope"})")), Error);

  PseudoOrbit o = perturbed_orbit(s, Point(Rational(1, 3)), 6, Rational(1, 100), 2);
  o.claimed_delta = Rational(1, 100);
  PseudoOrbit back = orbit_from_json(s, orbit_to_json(o));
  CHECK(back.points == o.points);
  CHECK(back.claimed_delta == o.claimed_delta);
  CHECK(orbit_from_csv(s, orbit_to_csv(o)).points == o.points);
  CHECK(rational_from_json(Json(3)) == Rational(3));
  CHECK(interval_set_from_json(to_json(IntervalSet::normalize({{0, Rational(1, 3)}, {Rational(1, 2), 1}}))).size() == 2);
}
