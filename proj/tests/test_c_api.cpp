#include <doctest.h>

#include <json.hpp>
#include <string>

#include "shadowlab.h"

using Json = nlohmann::json;

namespace {
Json take(char* s) {
  Json j = Json::parse(s);
  sl_string_free(s);
  return j;
}
}  // namespace

TEST_CASE("system lifecycle and errors") {
  CHECK(std::string(sl_version()).size() > 0);
  sl_system* sys = nullptr;
  REQUIRE(sl_system_create(R"({"kind":"tent","lambda":"2"})", &sys) == SL_OK);
  char* out = nullptr;
  REQUIRE(sl_system_describe(sys, &out) == SL_OK);
  CHECK(take(out)["kind"] == "pl");
  sl_system_free(sys);

  sl_system* bad = nullptr;
  CHECK(sl_system_create("{not json", &bad) == SL_PARSE);
  CHECK(std::string(sl_last_error_message()).size() > 0);
  CHECK(sl_system_create(R"({"kind":"tent","lambda":"3"})", &bad) != SL_OK);
  CHECK(sl_system_create(nullptr, &bad) == SL_INVALID_ARGUMENT);
}

TEST_CASE("shadowing through the C interface") {
  sl_system* sys = nullptr;
  REQUIRE(sl_system_create(R"({"kind":"tent","lambda":"2"})", &sys) == SL_OK);
  char* out = nullptr;
  REQUIRE(sl_shadow_oracle(sys, R"(["1/4","1/2","1"])", "1/8", R"({"transcript":true})", &out) == SL_OK);
  Json cert = take(out);
  CHECK(cert["verdict"] == "yes");
  CHECK(cert["transcript"].size() == 3);
  REQUIRE(sl_h_shadow_solve(sys, R"({"points":["1/4","1/2","1"]})", "1/8", nullptr, &out) == SL_OK);
  cert = take(out);
  CHECK(cert["verdict"] == "yes");
  CHECK(cert["witness"] == "1/4");
  CHECK(sl_shadow_oracle(sys, R"(["1/4"])", "-1", nullptr, &out) == SL_INVALID_ARGUMENT);
  sl_system_free(sys);
}

TEST_CASE("expansivity and kneading through the C interface") {
  sl_system* sys = nullptr;
  REQUIRE(sl_system_create(R"({"kind":"tent","lambda":"2"})", &sys) == SL_OK);
  char* out = nullptr;
  REQUIRE(sl_expansivity_check(sys, R"({"property":"expanding","region":[["0","1"]],"delta":"1/10","mu":"2"})",
                               &out) == SL_OK);
  CHECK(take(out)["holds"] == "falsified");
  REQUIRE(sl_expansivity_check(sys, R"({"property":"ball_expanding","region":[["0","1"]],"mu":"2","nu":"1/4"})",
                               &out) == SL_OK);
  CHECK(take(out)["holds"] == "certified");
  CHECK(sl_expansivity_check(sys, R"({"property":"nope"})", &out) == SL_INVALID_ARGUMENT);
  sl_system_free(sys);

  REQUIRE(sl_kneading_search(R"({"targetLength":15,"horizon":15,"steps":40})", &out) == SL_OK);
  Json k = take(out);
  CHECK(k["matched"] == true);
}

TEST_CASE("scenarios through the C interface") {
  char* out = nullptr;
  REQUIRE(sl_scenario_list(&out) == SL_OK);
  CHECK(take(out).size() >= 10);
  REQUIRE(sl_scenario_run("slimit-3", R"({"seed":3})", &out) == SL_OK);
  std::string text = out;
  sl_string_free(out);
  CHECK(Json::parse(text)["status"] == "pass");
  CHECK(sl_report_emit(text.c_str(), "csv", "/nonexistent-dir/r.csv") == SL_IO);
  CHECK(sl_scenario_run("no-such", nullptr, &out) == SL_INVALID_ARGUMENT);
}
