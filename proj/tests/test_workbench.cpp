#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "openbook/workbench.hpp"

using namespace openbook;
using nlohmann::json;

namespace {

std::string minimal_scenario(const std::string& extra = "") {
  return R"({
    "name": "t",
    "variables": ["x", "y", "z"],
    "map": ["x", "y"],
    "world": {"type": "sphere", "radii": [1, 2, 4], "mode": "global"},
    "tasks": ["identities"])" +
         extra + "\n}";
}

} // namespace

TEST_CASE("parse_scenario_json: defaults and fields") {
  Scenario s = parse_scenario_json(minimal_scenario());
  CHECK(s.name == "t");
  CHECK(s.map.p() == 2);
  CHECK(s.seed == 42);
  CHECK(s.n_starts == 200);
  CHECK(s.radii.size() == 3);
  CHECK(s.mode == SweepMode::Global);
  CHECK(s.tasks == std::set<std::string>{"identities"});

  Scenario full = parse_scenario_json(minimal_scenario(
      R"(, "seed": 7, "n_starts": 55, "euler": {"radius": "1/2",
          "links": [{"indices": [2, 1]}], "fiber": {"component": 1, "delta": "1/20"}},
         "claims": {"fiber": 1})"));
  CHECK(full.seed == 7);
  CHECK(full.n_starts == 55);
  CHECK(*full.euler_radius == Rational(1, 2));
  REQUIRE(full.links.size() == 1);
  CHECK(full.links[0].indices == std::vector<std::size_t>{1, 2});
  CHECK(full.fiber->delta == Rational(1, 20));
  CHECK(full.claims.at("fiber") == 1);
}

TEST_CASE("parse_scenario_json: schema errors carry field paths") {
  auto field_of = [](const std::string& text) {
    try {
      parse_scenario_json(text);
    } catch (const ScenarioError& e) {
      return e.field;
    }
    return std::string("(no error)");
  };
  CHECK(field_of("{}") == "name");
  CHECK(field_of(R"({"name": "t"})") == "variables");
  CHECK(field_of(R"({"name":"t","variables":["x"],"map":["x"],
                     "world":{"type":"torus","radius":1}})") == "world.type");
  CHECK(field_of(R"({"name":"t","variables":["x"],"map":["x"],
                     "world":{"type":"sphere"}})") == "world.radius");
  CHECK(field_of(R"({"name":"t","variables":["x"],"map":["x"],
                     "world":{"type":"sphere","radii":[1,3,2]}})") == "world.radii");
  CHECK(field_of(R"({"name":"t","variables":["x"],"map":["x + w"],
                     "world":{"type":"sphere","radius":1}})") == "map[0]");
  CHECK(field_of(R"({"name":"t","variables":["x"],"map":["x"],
                     "world":{"type":"sphere","radius":1},"tasks":["plot"]})") ==
        "tasks");
  CHECK(field_of(minimal_scenario(R"(, "euler": {"links": [{"indices": [3]}]})")) ==
        "euler.links[0].indices");
  CHECK(field_of(minimal_scenario(R"(, "euler": {"fiber": {"component": 9}})")) ==
        "euler.fiber.component");
}

TEST_CASE("builtins load and the listing is stable") {
  auto names = list_builtins();
  REQUIRE(names.size() == 5);
  std::vector<std::string> expect = {"milnor-local", "milnor-global", "polar-mixed",
                                     "smooth-global", "toy-xy-sphere"};
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(names[i].first == expect[i]);
    CHECK_FALSE(names[i].second.empty());
    Scenario s = load_builtin(expect[i]);
    CHECK(s.name == expect[i]);
    CHECK(s.radii.size() >= 1);
  }
  CHECK(list_builtins() == names);
  CHECK_THROWS_AS(load_builtin("nope"), PolyError);
}

TEST_CASE("verify_identities on the toy builtin") {
  IdentitySummary id = verify_identities(load_builtin("toy-xy-sphere"));
  CHECK(id.pass());
  CHECK(id.chart_samples == 100);
  CHECK(id.chart_failures == 0);
}

TEST_CASE("run_scenario: toy builtin end to end") {
  Scenario s = load_builtin("toy-xy-sphere");
  RunResult r = run_scenario(s);
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.report_json);
  CHECK(rep["version"] == "0.1.0");
  CHECK(rep["scenario"]["name"] == "toy-xy-sphere");
  CHECK(rep["scenario"]["seed"] == 42);
  CHECK(rep["tolerances"].contains("emptiness_score"));
  CHECK(rep["identities"]["pass"] == true);
  CHECK(rep["conditions"]["fibration"] == true);
  CHECK(rep["conditions"]["heuristic"] == true);
  CHECK(rep["euler"]["W"]["value"] == 2);
  CHECK(rep["euler"]["W"]["provenance"] == "morse");
  CHECK(rep["euler"]["link[1,2]"]["value"] == 2);
  CHECK(rep["euler"]["fiber"]["value"] == 1);
  CHECK(rep["consistency"]["algebraic_pass"] == true);
  CHECK(rep["consistency"]["fiber_chi"]["value"] == 1);
  CHECK(rep["exit_code"] == 0);
  // csv header: variables, residual, basin_count
  CHECK(r.solutions_csv.rfind("x,y,z,residual,basin_count\n", 0) == 0);
}

TEST_CASE("run_scenario is byte-deterministic given the seed") {
  Scenario s = load_builtin("smooth-global");
  RunResult a = run_scenario(s);
  RunResult b = run_scenario(s);
  CHECK(a.report_json == b.report_json);
  CHECK(a.solutions_csv == b.solutions_csv);
  CHECK(a.report_txt == b.report_txt);
  s.seed = 7;
  RunResult c = run_scenario(s);
  CHECK(a.report_json != c.report_json);
}

TEST_CASE("disputes do not affect the exit code") {
  Scenario s = load_builtin("toy-xy-sphere");
  s.tasks = {"euler", "consistency"};
  s.claims["fiber"] = 5;
  RunResult r = run_scenario(s);
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.report_json);
  REQUIRE(rep["consistency"]["disputes"].size() == 1);
  CHECK(rep["consistency"]["algebraic_pass"] == true);
}

TEST_CASE("write_artifacts produces the three files") {
  Scenario s = load_builtin("toy-xy-sphere");
  s.tasks = {"identities"};
  RunResult r = run_scenario(s);
  auto dir = std::filesystem::temp_directory_path() / "openbook_wb_test";
  std::filesystem::remove_all(dir);
  write_artifacts(r, dir.string());
  for (const char* f : {"report.json", "report.txt", "solutions.csv"})
    CHECK(std::filesystem::exists(dir / f));
  std::ifstream in(dir / "report.json");
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == r.report_json);
  std::filesystem::remove_all(dir);
}

TEST_CASE("load_scenario reads files and reports parse failures") {
  auto path = std::filesystem::temp_directory_path() / "openbook_scenario.json";
  {
    std::ofstream out(path);
    out << minimal_scenario();
  }
  Scenario s = load_scenario(path.string());
  CHECK(s.name == "t");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_scenario(path.string()), ScenarioError);
}
