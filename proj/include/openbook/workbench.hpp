#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openbook/euler.hpp"

namespace openbook {

struct ScenarioError : PolyError {
  explicit ScenarioError(const std::string& field, const std::string& what)
      : PolyError("scenario field '" + field + "': " + what), field(field) {}
  std::string field;
};

struct LinkRequest {
  std::vector<std::size_t> indices;  // sorted, 1-based component indices
  // Declared smooth pieces for singular varieties: each piece is a list of
  // equations replacing {f_I = 0}; chi is assembled by inclusion-exclusion.
  std::vector<std::vector<Polynomial>> pieces;
};

struct FiberRequest {
  std::size_t component = 1;  // barrier component j: {f_j >= delta, f_i = 0}
  Rational delta = Rational(1, 10);
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> variables;
  PolyMap map;
  std::vector<Rational> radii;  // monotone sweep schedule
  SweepMode mode = SweepMode::Global;
  std::set<std::string> tasks;  // subset of identities|conditions|euler|consistency
  std::uint64_t seed = 42;
  int n_starts = 200;
  std::optional<Rational> euler_radius;  // defaults to the last schedule entry
  std::vector<LinkRequest> links;
  std::optional<FiberRequest> fiber;
  std::map<std::string, long long> claims;  // externally claimed chi values
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario_json(const std::string& text);

struct IdentitySummary {
  bool milnor_equality = true;       // vector identity over all component triples
  bool normalized_gradient = true;   // cleared gradient identity, symbolically zero
  bool antisymmetry = true;          // omega_{i,j} + omega_{j,i} = 0
  int chart_samples = 0;
  int chart_failures = 0;            // determinant or spectrum check failures
  bool pass() const {
    return milnor_equality && normalized_gradient && antisymmetry &&
           chart_failures == 0 && chart_samples > 0;
  }
};

IdentitySummary verify_identities(const Scenario& s);

struct RunResult {
  int exit_code = 0;
  std::string report_json;
  std::string report_txt;
  std::string solutions_csv;
};

RunResult run_scenario(const Scenario& s);

// Writes report.json, report.txt, solutions.csv into out_dir.
void write_artifacts(const RunResult& r, const std::string& out_dir);

std::vector<std::pair<std::string, std::string>> list_builtins();
Scenario load_builtin(const std::string& name);

} // namespace openbook
