#include "openbook/workbench.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "openbook/omega.hpp"

namespace openbook {

using nlohmann::json;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  s ^= s >> 30;
  s *= 0xbf58476d1ce4e5b9ULL;
  s ^= s >> 27;
  s *= 0x94d049bb133111ebULL;
  return s ^ (s >> 31);
}

Rational rational_from_json(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) return Rational(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s));
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ScenarioError(field, "cannot parse '" + s + "' as a rational");
    }
  }
  throw ScenarioError(field, "expected a number or a rational string");
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(path + key, "missing");
  return *it;
}

Polynomial parse_expr(const std::string& expr, const std::vector<std::string>& vars,
                      const std::string& field) {
  try {
    return Polynomial::parse(expr, vars);
  } catch (const ParseError& e) {
    throw ScenarioError(field, std::string(e.what()));
  }
}

Polynomial sphere_poly(std::size_t n, const Rational& r) {
  return WorldSpec::sphere(n, r).constraints.front();
}

} // namespace

Scenario parse_scenario_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError("(root)", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioError("(root)", "expected an object");

  Scenario s;
  s.name = require(j, "name", "").get<std::string>();
  if (j.contains("description")) s.description = j["description"].get<std::string>();

  const json& jvars = require(j, "variables", "");
  if (!jvars.is_array() || jvars.empty())
    throw ScenarioError("variables", "expected a nonempty array");
  for (const auto& v : jvars) s.variables.push_back(v.get<std::string>());

  const json& jmap = require(j, "map", "");
  if (!jmap.is_array() || jmap.empty())
    throw ScenarioError("map", "expected a nonempty array");
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < jmap.size(); ++i)
    comps.push_back(parse_expr(jmap[i].get<std::string>(), s.variables,
                               "map[" + std::to_string(i) + "]"));
  s.map = PolyMap(std::move(comps));

  const json& jw = require(j, "world", "");
  if (require(jw, "type", "world.").get<std::string>() != "sphere")
    throw ScenarioError("world.type", "only 'sphere' is supported");
  if (jw.contains("radii")) {
    for (std::size_t i = 0; i < jw["radii"].size(); ++i)
      s.radii.push_back(rational_from_json(jw["radii"][i],
                                           "world.radii[" + std::to_string(i) + "]"));
  } else if (jw.contains("radius")) {
    s.radii.push_back(rational_from_json(jw["radius"], "world.radius"));
  } else {
    throw ScenarioError("world.radius", "missing (or provide world.radii)");
  }
  for (const auto& r : s.radii)
    if (r <= 0) throw ScenarioError("world.radii", "radii must be positive");
  std::string mode = jw.contains("mode") ? jw["mode"].get<std::string>() : "global";
  if (mode == "local")
    s.mode = SweepMode::Local;
  else if (mode == "global")
    s.mode = SweepMode::Global;
  else
    throw ScenarioError("world.mode", "expected 'local' or 'global'");
  bool increasing = std::is_sorted(s.radii.begin(), s.radii.end());
  bool decreasing = std::is_sorted(s.radii.rbegin(), s.radii.rend());
  if (!increasing && !decreasing)
    throw ScenarioError("world.radii", "sweep schedule must be monotone");

  if (j.contains("tasks")) {
    for (const auto& t : j["tasks"]) {
      std::string name = t.get<std::string>();
      if (name != "identities" && name != "conditions" && name != "euler" &&
          name != "consistency")
        throw ScenarioError("tasks", "unknown task '" + name + "'");
      s.tasks.insert(name);
    }
  } else {
    s.tasks = {"identities", "conditions", "euler", "consistency"};
  }

  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_starts")) {
    s.n_starts = j["n_starts"].get<int>();
    if (s.n_starts < 1) throw ScenarioError("n_starts", "must be positive");
  }

  if (j.contains("euler")) {
    const json& je = j["euler"];
    if (je.contains("radius"))
      s.euler_radius = rational_from_json(je["radius"], "euler.radius");
    if (je.contains("links")) {
      for (std::size_t i = 0; i < je["links"].size(); ++i) {
        const json& jl = je["links"][i];
        std::string path = "euler.links[" + std::to_string(i) + "].";
        LinkRequest req;
        for (const auto& ix : require(jl, "indices", path)) {
          std::size_t k = ix.get<std::size_t>();
          if (k < 1 || k > s.map.p())
            throw ScenarioError(path + "indices", "component index out of range");
          req.indices.push_back(k);
        }
        std::sort(req.indices.begin(), req.indices.end());
        if (std::adjacent_find(req.indices.begin(), req.indices.end()) !=
            req.indices.end())
          throw ScenarioError(path + "indices", "duplicate component index");
        if (jl.contains("pieces")) {
          for (std::size_t a = 0; a < jl["pieces"].size(); ++a) {
            std::vector<Polynomial> piece;
            for (std::size_t b = 0; b < jl["pieces"][a].size(); ++b)
              piece.push_back(parse_expr(
                  jl["pieces"][a][b].get<std::string>(), s.variables,
                  path + "pieces[" + std::to_string(a) + "][" + std::to_string(b) +
                      "]"));
            if (piece.empty())
              throw ScenarioError(path + "pieces", "empty piece");
            req.pieces.push_back(std::move(piece));
          }
        }
        s.links.push_back(std::move(req));
      }
    }
    if (je.contains("fiber")) {
      const json& jf = je["fiber"];
      FiberRequest fr;
      fr.component = require(jf, "component", "euler.fiber.").get<std::size_t>();
      if (fr.component < 1 || fr.component > s.map.p())
        throw ScenarioError("euler.fiber.component", "component index out of range");
      if (jf.contains("delta"))
        fr.delta = rational_from_json(jf["delta"], "euler.fiber.delta");
      if (fr.delta <= 0)
        throw ScenarioError("euler.fiber.delta", "must be positive");
      s.fiber = fr;
    }
  }

  if (j.contains("claims")) {
    for (const auto& [key, val] : j["claims"].items()) {
      if (!val.is_number_integer())
        throw ScenarioError("claims." + key, "expected an integer chi value");
      s.claims[key] = val.get<long long>();
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("(file)", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

IdentitySummary verify_identities(const Scenario& s) {
  IdentitySummary out;
  const PolyMap& F = s.map;
  const std::size_t p = F.p();

  for (std::size_t i = 1; i <= p && out.milnor_equality; ++i)
    for (std::size_t j = i + 1; j <= p && out.milnor_equality; ++j)
      for (std::size_t k = j + 1; k <= p; ++k)
        for (const auto& c : milnor_equality_residual(F, i, j, k))
          if (!c.is_zero()) out.milnor_equality = false;

  for (std::size_t j = 1; j <= p && out.normalized_gradient; ++j)
    for (const auto& c : normalized_gradient_identity(F, j))
      if (!c.is_zero()) out.normalized_gradient = false;

  for (std::size_t i = 1; i <= p && out.antisymmetry; ++i)
    for (std::size_t j = 1; j <= p; ++j) {
      PolyVector a = omega(F, i, j);
      PolyVector b = omega(F, j, i);
      for (std::size_t c = 0; c < a.size(); ++c)
        if (!(a[c] + b[c]).is_zero()) out.antisymmetry = false;
    }

  if (p < 2) {
    out.chart_samples = 1;  // nothing chart-shaped to verify
    return out;
  }
  double radius = to_double(s.radii.front());
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, F.num_vars(), radius};
  Rng rng(mix_seed(s.seed, 77));
  for (std::size_t chart = 1; chart <= p; ++chart) {
    int taken = 0;
    for (int t = 0; t < 400 && taken < 50; ++t) {
      std::vector<double> x = sph.draw(rng);
      std::vector<double> f = F.evaluate(x);
      double fscale = 0.0;
      for (double v : f) fscale = std::max(fscale, std::abs(v));
      if (std::abs(f[chart - 1]) <= 1e-3 * (1.0 + fscale)) continue;
      ChartMatrix cm = chart_matrix(F, chart, x);
      ++out.chart_samples;
      if (!cm.det_check || !cm.eigen_check) ++out.chart_failures;
      ++taken;
    }
  }
  return out;
}

namespace {

struct EulerOutcomes {
  std::optional<ChiValue> chi_W;
  std::map<std::vector<std::size_t>, ChiValue> links;
  std::set<std::vector<std::size_t>> singular;
  std::optional<ChiValue> fiber;
  std::optional<CurveChi> fiber_arcs;
  std::vector<std::string> errors;
};

std::vector<Polynomial> dedupe(std::vector<Polynomial> polys) {
  std::vector<Polynomial> out;
  for (auto& p : polys) {
    bool seen = false;
    for (const auto& q : out)
      if (p == q) seen = true;
    if (!seen) out.push_back(std::move(p));
  }
  return out;
}

long long chi_inclusion_exclusion(const LinkRequest& req, const Polynomial& sphere,
                                  double radius, std::uint64_t seed, int n_starts) {
  const std::size_t m = req.pieces.size();
  long long chi = 0;
  for (std::size_t mask = 1; mask < (1ULL << m); ++mask) {
    std::vector<Polynomial> g;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1ULL << i))
        g.insert(g.end(), req.pieces[i].begin(), req.pieces[i].end());
    g = dedupe(std::move(g));
    g.push_back(sphere);
    long long sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    chi += sign * morse_chi_closed(g, radius, mix_seed(seed, 40 + mask), n_starts).chi;
  }
  return chi;
}

EulerOutcomes compute_euler(const Scenario& s) {
  EulerOutcomes out;
  const PolyMap& F = s.map;
  const std::size_t N = F.num_vars();
  Rational r = s.euler_radius ? *s.euler_radius : s.radii.back();
  double radius = to_double(r);
  Polynomial sphere = sphere_poly(N, r);
  int starts = std::max(s.n_starts, 150);

  try {
    out.chi_W = ChiValue{morse_chi_closed({sphere}, radius, mix_seed(s.seed, 21),
                                          starts)
                             .chi,
                         "morse"};
  } catch (const PolyError& e) {
    out.errors.push_back(std::string("chi W: ") + e.what());
  }

  for (std::size_t li = 0; li < s.links.size(); ++li) {
    const LinkRequest& req = s.links[li];
    std::string key = chi_key(req.indices);
    try {
      if (req.pieces.empty()) {
        std::vector<Polynomial> g;
        for (std::size_t ix : req.indices) g.push_back(F.components[ix - 1]);
        g.push_back(sphere);
        out.links[req.indices] =
            ChiValue{morse_chi_closed(g, radius, mix_seed(s.seed, 60 + li), starts)
                         .chi,
                     "morse"};
      } else {
        out.links[req.indices] = ChiValue{
            chi_inclusion_exclusion(req, sphere, radius, mix_seed(s.seed, 60 + li),
                                    starts),
            "inclusion-exclusion"};
        out.singular.insert(req.indices);
      }
    } catch (const PolyError& e) {
      out.errors.push_back("chi " + key + ": refused: " + e.what());
    }
  }

  if (s.fiber) {
    std::vector<Polynomial> g;
    for (std::size_t i = 1; i <= F.p(); ++i)
      if (i != s.fiber->component) g.push_back(F.components[i - 1]);
    g.push_back(sphere);
    const Polynomial& barrier = F.components[s.fiber->component - 1];
    double delta = to_double(s.fiber->delta);
    try {
      out.fiber = ChiValue{
          morse_chi_boundary(g, barrier, delta, radius, mix_seed(s.seed, 91), starts)
              .chi,
          "boundary"};
    } catch (const PolyError& e) {
      out.errors.push_back(std::string("chi fiber: refused: ") + e.what());
    }
    if (N == F.p() + 1) {  // positive part of the fiber is a curve
      PolySystem sys;
      sys.equations = g;
      sys.inequations.push_back({barrier, SignKind::AtLeast, delta});
      sys.ambient_vars = N;
      SamplerSpec sph{SamplerSpec::Kind::SphereSurface, N, radius};
      try {
        out.fiber_arcs = curve_chi_oracle(sys, sph, std::max(1200, 6 * starts),
                                          mix_seed(s.seed, 93));
      } catch (const PolyError& e) {
        out.errors.push_back(std::string("fiber curve oracle: ") + e.what());
      }
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json tolerances_json() {
  return json{{"residual_accept_rel", 1e-10},
              {"exact_recheck_rel", 1e-9},
              {"emptiness_score", 1e-6},
              {"chart_det_rel", 1e-9},
              {"chart_eigen_abs", 1e-8},
              {"rank_threshold_rel", 1e-9},
              {"merge_radius_rel", 1e-6},
              {"local_slope_threshold", 0.5},
              {"condition_a_distance_rel", 0.01},
              {"morse_degeneracy_eig", 1e-6}};
}

json sweep_json(const SweepResult& sr) {
  json steps = json::array();
  for (const auto& st : sr.steps)
    steps.push_back(json{{"radius", st.radius},
                         {"n_solutions", st.n_solutions},
                         {"min_norm", st.min_norm},
                         {"min_emptiness_score", st.min_score}});
  return json{{"verdict", to_string(sr.verdict)}, {"note", sr.note}, {"steps", steps}};
}

json chi_value_json(const ChiValue& v) {
  return json{{"value", v.value}, {"provenance", v.provenance}};
}

} // namespace

RunResult run_scenario(const Scenario& s) {
  RunResult out;
  json rep;
  rep["version"] = "0.1.0";
  rep["schema"] = 1;

  json echo;
  echo["name"] = s.name;
  echo["description"] = s.description;
  echo["variables"] = s.variables;
  json maps = json::array();
  for (const auto& f : s.map.components) maps.push_back(f.to_string(s.variables));
  echo["map"] = maps;
  json radii = json::array();
  for (const auto& r : s.radii) radii.push_back(to_double(r));
  echo["radii"] = radii;
  echo["mode"] = (s.mode == SweepMode::Local) ? "local" : "global";
  echo["tasks"] = s.tasks;
  echo["seed"] = s.seed;
  echo["n_starts"] = s.n_starts;
  rep["scenario"] = echo;
  rep["tolerances"] = tolerances_json();

  bool identity_failure = false;
  std::ostringstream txt;
  txt << "openbook workbench: " << s.name << "\n";
  if (!s.description.empty()) txt << s.description << "\n";
  txt << "seed " << s.seed << ", " << s.n_starts << " starts per solve\n\n";

  if (s.tasks.count("identities")) {
    IdentitySummary id = verify_identities(s);
    identity_failure = identity_failure || !id.pass();
    rep["identities"] = json{{"milnor_equality", id.milnor_equality},
                             {"normalized_gradient", id.normalized_gradient},
                             {"antisymmetry", id.antisymmetry},
                             {"chart_samples", id.chart_samples},
                             {"chart_failures", id.chart_failures},
                             {"pass", id.pass()}};
    txt << "identities: " << (id.pass() ? "pass" : "FAIL") << "  (" << id.chart_samples
        << " chart samples, " << id.chart_failures << " failures)\n";
  }

  std::vector<std::vector<double>> csv_rows;  // coords..., residual, basin
  std::vector<int> csv_basins;
  auto collect = [&](const SweepResult& sr) {
    for (const auto& st : sr.steps)
      for (const auto& sol : st.solutions) {
        std::vector<double> row(sol.coords.begin(),
                                sol.coords.begin() + s.map.num_vars());
        row.push_back(sol.residual);
        csv_rows.push_back(std::move(row));
        csv_basins.push_back(sol.basin_count);
      }
  };

  if (s.tasks.count("conditions")) {
    ConditionReport cr =
        condition_verdicts(s.map, s.radii, s.mode, s.n_starts, mix_seed(s.seed, 11));
    collect(cr.sigma_sweep);
    collect(cr.sigma_bar_sweep);
    json jc;
    jc["condition_a"] = cr.condition_a;
    jc["condition_b"] = cr.condition_b;
    jc["fibration"] = cr.fibration;
    jc["heuristic"] = true;
    jc["notes"] = cr.notes;
    jc["critical_set_sweep"] = sweep_json(cr.sigma_sweep);
    jc["normalized_critical_sweep"] = sweep_json(cr.sigma_bar_sweep);
    json dists = json::array();
    for (double d : cr.min_dist_to_V) dists.push_back(d);
    jc["min_dist_to_zero_set"] = dists;
    rep["conditions"] = jc;
    txt << "condition (a): " << (cr.condition_a ? "holds" : "fails")
        << "   condition (b): " << (cr.condition_b ? "holds" : "fails")
        << "   fibration: " << (cr.fibration ? "YES" : "NO") << "  [heuristic]\n";
    if (!cr.fibration && !cr.sigma_bar_sweep.steps.empty()) {
      for (const auto& st : cr.sigma_bar_sweep.steps)
        if (!st.solutions.empty()) {
          txt << "  witness at radius " << fmt_double(st.radius) << ": (";
          for (std::size_t c = 0; c < s.map.num_vars(); ++c)
            txt << (c ? ", " : "") << fmt_double(st.solutions.front().coords[c]);
          txt << ")\n";
          break;
        }
    }
  }

  std::optional<EulerOutcomes> euler;
  if (s.tasks.count("euler") || s.tasks.count("consistency")) {
    if (!s.links.empty() || s.fiber || s.tasks.count("euler"))
      euler = compute_euler(s);
  }
  if (euler && s.tasks.count("euler")) {
    json je;
    if (euler->chi_W) je["W"] = chi_value_json(*euler->chi_W);
    for (const auto& [I, v] : euler->links) je[chi_key(I)] = chi_value_json(v);
    if (euler->fiber) je["fiber"] = chi_value_json(*euler->fiber);
    if (euler->fiber_arcs)
      je["fiber_curve_oracle"] = json{{"chi", euler->fiber_arcs->chi},
                                      {"arcs", euler->fiber_arcs->arcs},
                                      {"loops", euler->fiber_arcs->loops},
                                      {"provenance", "oracle"}};
    je["errors"] = euler->errors;
    rep["euler"] = je;
    txt << "\nchi table:\n";
    if (euler->chi_W) txt << "  chi(W) = " << euler->chi_W->value << "  [morse]\n";
    for (const auto& [I, v] : euler->links)
      txt << "  chi(" << chi_key(I) << ") = " << v.value << "  [" << v.provenance
          << "]\n";
    if (euler->fiber) txt << "  chi(fiber) = " << euler->fiber->value << "  [boundary]\n";
    if (euler->fiber_arcs)
      txt << "  chi(fiber, curve oracle) = " << euler->fiber_arcs->chi << "  ["
          << euler->fiber_arcs->arcs << " arcs, " << euler->fiber_arcs->loops
          << " loops]\n";
    for (const auto& e : euler->errors) txt << "  error: " << e << "\n";
  }

  if (euler && s.tasks.count("consistency")) {
    ChiInputs in;
    in.n = static_cast<int>(s.map.num_vars());
    in.p = static_cast<int>(s.map.p());
    in.chi_W = euler->chi_W;
    in.links = euler->links;
    in.singular = euler->singular;
    in.fiber = euler->fiber;
    in.claimed = s.claims;
    ChiReport cr = consistency_report(in);
    identity_failure = identity_failure || !cr.algebraic_pass;
    json jc;
    jc["algebraic_pass"] = cr.algebraic_pass;
    if (cr.fiber_chi)
      jc["fiber_chi"] = json{{"value", *cr.fiber_chi}, {"provenance", cr.fiber_provenance}};
    json ids = json::array();
    for (const auto& id : cr.identities)
      ids.push_back(json{{"name", id.name},
                         {"inputs", id.inputs},
                         {"lhs", id.lhs},
                         {"rhs", id.rhs},
                         {"pass", id.pass},
                         {"informational", id.informational}});
    jc["identities"] = ids;
    jc["disputes"] = cr.disputes;
    rep["consistency"] = jc;
    txt << "\n" << cr.to_text();
  }

  rep["exit_code"] = identity_failure ? 1 : 0;
  out.exit_code = identity_failure ? 1 : 0;
  out.report_json = rep.dump(2) + "\n";

  std::ostringstream csv;
  for (std::size_t c = 0; c < s.variables.size(); ++c)
    csv << (c ? "," : "") << s.variables[c];
  csv << ",residual,basin_count\n";
  for (std::size_t i = 0; i < csv_rows.size(); ++i) {
    for (std::size_t c = 0; c < csv_rows[i].size(); ++c)
      csv << (c ? "," : "") << fmt_double(csv_rows[i][c]);
    csv << "," << csv_basins[i] << "\n";
  }
  out.solutions_csv = csv.str();

  txt << "\nexit status " << out.exit_code << "\n";
  out.report_txt = txt.str();
  return out;
}

void write_artifacts(const RunResult& r, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
    if (!f) throw PolyError("cannot write " + name + " in " + out_dir);
    f << content;
  };
  write("report.json", r.report_json);
  write("report.txt", r.report_txt);
  write("solutions.csv", r.solutions_csv);
}

} // namespace openbook
