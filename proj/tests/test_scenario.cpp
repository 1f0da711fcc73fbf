#include <doctest.h>

#include <string>

#include "ks/harness.hpp"
#include "ks/scenario.hpp"

using namespace ks;

namespace {

const char* kMinimal = R"({"schema_version": 1, "name": "tiny"})";

ScenarioError parse_error(const std::string& text) {
  try {
    parse_scenario(text, "test.json");
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("expected a ScenarioError");
  return ScenarioError("", "");
}

}  // namespace

TEST_CASE("minimal file gets the documented defaults") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.name == "tiny");
  CHECK(s.grid.dim == 1);
  CHECK(s.grid.n == 256);
  CHECK(s.grid.half_width == 20.0);
  CHECK(s.params.chi == 0.0);
  CHECK(s.params.a == 1.0);
  CHECK(s.params.b == 1.0);
  CHECK(s.initial.kind == ic::Kind::constant);
  CHECK(s.stepping.dt == 0.01);
  CHECK(s.stepping.t_end == 1.0);
  CHECK(s.stepping.dealias);
  CHECK(s.diagnostics.sample_every == 0.1);
  CHECK(s.diagnostics.guard == 0.1);
  CHECK(s.checks.sandwich);
  CHECK(s.checks.boundary_guard);
  CHECK_FALSE(s.checks.speed.has_value());
}

TEST_CASE("non-positive dt is named in the error") {
  const auto e = parse_error(R"({"schema_version": 1, "name": "x",
  "stepping": {"dt": 0}})");
  CHECK(std::string(e.what()).find("dt") != std::string::npos);
  CHECK(e.field() == "stepping.dt");
  CHECK(e.line() == 2);
}

TEST_CASE("unknown keys are rejected") {
  const auto e = parse_error(R"({"schema_version": 1, "name": "x",
  "params": {
    "xchi": 0.3
  }})");
  CHECK(std::string(e.what()).find("xchi") != std::string::npos);
  CHECK(e.line() == 3);
  CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "name": "x", "extra": 1})"), ScenarioError);
}

TEST_CASE("schema version and required fields") {
  CHECK(parse_error(R"({"name": "x"})").field() == "schema_version");
  CHECK(parse_error(R"({"schema_version": 2, "name": "x"})").field() == "schema_version");
  CHECK(parse_error(R"({"schema_version": 1})").field() == "name");
}

TEST_CASE("syntax errors report a line") {
  const auto e = parse_error("{\n \"schema_version\": 1,\n \"name\": \"x\",,\n}");
  CHECK(e.line() == 3);
  CHECK(e.field().empty());
}

TEST_CASE("type errors name the field") {
  CHECK(parse_error(R"({"schema_version": 1, "name": "x", "grid": {"n": "big"}})").field() == "grid.n");
  CHECK(parse_error(R"({"schema_version": 1, "name": "x", "initial": {"kind": "tophat"}})").field() ==
        "initial.kind");
  CHECK(parse_error(R"({"schema_version": 1, "name": "x", "grid": {"n": 100}})").field() == "grid.n");
  CHECK(parse_error(R"({"schema_version": 1, "name": "x", "params": {"b": 0}})").field() == "params.b");
}

TEST_CASE("checks can be switched on with defaults or off") {
  const Scenario s = parse_scenario(R"({"schema_version": 1, "name": "x",
    "checks": {"sandwich": false, "spreading": {}, "speed": {"min": 1.8, "max": 2.05}, "envelope": false}})");
  CHECK_FALSE(s.checks.sandwich);
  REQUIRE(s.checks.spreading.has_value());
  CHECK(s.checks.spreading->inner_fraction == 0.5);
  CHECK(s.checks.speed->max == 2.05);
  CHECK_FALSE(s.checks.envelope.has_value());
}

TEST_CASE("positive_random floor defaults to a tenth of the carrying capacity") {
  const Scenario s = parse_scenario(R"({"schema_version": 1, "name": "x",
    "params": {"a": 2, "b": 4}, "initial": {"kind": "positive_random", "width": 2}})");
  CHECK(s.initial.floor == doctest::Approx(0.05));
}

TEST_CASE("json round trip") {
  for (const auto& path : harness::bundled_scenarios()) {
    const Scenario s = load_scenario(path.string());
    const Scenario t = scenario_from_json(to_json(s));
    CHECK(to_json(t) == to_json(s));
  }
}

TEST_CASE("set_numeric_field") {
  Scenario s = parse_scenario(kMinimal);
  set_numeric_field(s, "chi", 0.25);
  CHECK(s.params.chi == 0.25);
  set_numeric_field(s, "params.b", 3.0);
  CHECK(s.params.b == 3.0);
  set_numeric_field(s, "n", 512);
  CHECK(s.grid.n == 512);
  CHECK_THROWS_AS(set_numeric_field(s, "n", 300.5), ScenarioError);
  CHECK_THROWS_AS(set_numeric_field(s, "name", 1.0), ScenarioError);
  CHECK_THROWS_AS(set_numeric_field(s, "initial.kind", 1.0), ScenarioError);
  CHECK_THROWS_AS(set_numeric_field(s, "params.xchi", 1.0), ScenarioError);
  CHECK_THROWS_AS(set_numeric_field(s, "dt", -1.0), ScenarioError);
}

TEST_CASE("bundled scenarios load") {
  const auto files = harness::bundled_scenarios();
  CHECK(files.size() >= 6);
  for (const auto& f : files) CHECK_NOTHROW(load_scenario(f.string()));
}
