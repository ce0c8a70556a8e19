// Python bindings for the workbench: map construction, normal-frame
// identities, condition verdicts, chi computations and scenario runs.
// Values cross the boundary as plain strings, numbers and dicts; exact
// rationals travel as "a/b" strings.

#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "openbook/euler.hpp"
#include "openbook/omega.hpp"
#include "openbook/workbench.hpp"

namespace py = pybind11;
using namespace openbook;

namespace {

PolyMap make_map(const std::vector<std::string>& components,
                 const std::vector<std::string>& variables) {
  std::vector<Polynomial> comps;
  for (const auto& c : components) comps.push_back(Polynomial::parse(c, variables));
  return PolyMap(std::move(comps));
}

std::vector<Polynomial> parse_all(const std::vector<std::string>& exprs,
                                  const std::vector<std::string>& variables) {
  std::vector<Polynomial> out;
  for (const auto& e : exprs) out.push_back(Polynomial::parse(e, variables));
  return out;
}

std::vector<Rational> parse_radii(const std::vector<std::string>& radii) {
  std::vector<Rational> out;
  for (const auto& r : radii) out.emplace_back(r);
  return out;
}

SweepMode parse_mode(const std::string& mode) {
  if (mode == "local") return SweepMode::Local;
  if (mode == "global") return SweepMode::Global;
  throw PolyError("mode must be 'local' or 'global', got '" + mode + "'");
}

py::dict morse_dict(const MorseOutcome& out) {
  py::dict d;
  d["chi"] = out.chi;
  d["functionals_tried"] = out.functionals_tried;
  py::list recs;
  for (const auto& r : out.records) {
    py::dict rd;
    rd["point"] = r.point;
    rd["value"] = r.value;
    rd["index"] = r.index;
    rd["location"] =
        r.location == MorseRecord::Location::Interior ? "interior" : "boundary-inward";
    recs.append(rd);
  }
  d["records"] = recs;
  return d;
}

} // namespace

PYBIND11_MODULE(_openbook, m) {
  m.doc() = "open book structure workbench core";

  py::register_exception<PolyError>(m, "PolyError");

  m.def(
      "omega",
      [](const std::vector<std::string>& components,
         const std::vector<std::string>& variables, std::size_t i, std::size_t j) {
        PolyVector w = omega(make_map(components, variables), i, j);
        std::vector<std::string> out;
        for (const auto& p : w) out.push_back(p.to_string(variables));
        return out;
      },
      py::arg("components"), py::arg("variables"), py::arg("i"), py::arg("j"),
      "omega_{i,j} = f_i grad f_j - f_j grad f_i as expression strings");

  m.def(
      "normalized_gradient_residual",
      [](const std::vector<std::string>& components,
         const std::vector<std::string>& variables, std::size_t j,
         const std::vector<double>& point) {
        return normalized_gradient_residual(make_map(components, variables), j, point);
      },
      py::arg("components"), py::arg("variables"), py::arg("j"), py::arg("point"),
      "max-norm of the cleared normalized-gradient identity at a point off V(F)");

  m.def(
      "chart_check",
      [](const std::vector<std::string>& components,
         const std::vector<std::string>& variables, std::size_t chart,
         const std::vector<double>& point) {
        ChartMatrix cm = chart_matrix(make_map(components, variables), chart, point);
        py::dict d;
        d["chart_index"] = cm.chart_index;
        d["det_check"] = cm.det_check;
        d["det_rel_error"] = cm.det_rel_error;
        d["eigen_check"] = cm.eigen_check;
        d["eigen_abs_error"] = cm.eigen_abs_error;
        std::vector<std::vector<double>> rows;
        for (Eigen::Index r = 0; r < cm.entries.rows(); ++r) {
          std::vector<double> row;
          for (Eigen::Index c = 0; c < cm.entries.cols(); ++c)
            row.push_back(cm.entries(r, c));
          rows.push_back(std::move(row));
        }
        d["entries"] = rows;
        return d;
      },
      py::arg("components"), py::arg("variables"), py::arg("chart"), py::arg("point"),
      "chart matrix with determinant and spectrum verification at a point");

  m.def(
      "condition_verdicts",
      [](const std::vector<std::string>& components,
         const std::vector<std::string>& variables,
         const std::vector<std::string>& radii, const std::string& mode, int n_starts,
         std::uint64_t seed) {
        ConditionReport cr =
            condition_verdicts(make_map(components, variables), parse_radii(radii),
                               parse_mode(mode), n_starts, seed);
        py::dict d;
        d["condition_a"] = cr.condition_a;
        d["condition_b"] = cr.condition_b;
        d["fibration"] = cr.fibration;
        d["sigma_verdict"] = to_string(cr.sigma_sweep.verdict);
        d["sigma_bar_verdict"] = to_string(cr.sigma_bar_sweep.verdict);
        d["notes"] = cr.notes;
        return d;
      },
      py::arg("components"), py::arg("variables"), py::arg("radii"), py::arg("mode"),
      py::arg("n_starts") = 200, py::arg("seed") = 42,
      "heuristic open-book condition verdicts from a radius sweep");

  m.def(
      "morse_chi_closed",
      [](const std::vector<std::string>& constraints,
         const std::vector<std::string>& variables, double sample_radius,
         std::uint64_t seed, int n_starts) {
        return morse_dict(morse_chi_closed(parse_all(constraints, variables),
                                           sample_radius, seed, n_starts));
      },
      py::arg("constraints"), py::arg("variables"), py::arg("sample_radius"),
      py::arg("seed") = 42, py::arg("n_starts") = 300,
      "Euler characteristic of a compact regular level set by Morse counting");

  m.def(
      "morse_chi_boundary",
      [](const std::vector<std::string>& constraints, const std::string& barrier,
         double delta, const std::vector<std::string>& variables, double sample_radius,
         std::uint64_t seed, int n_starts) {
        return morse_dict(morse_chi_boundary(parse_all(constraints, variables),
                                             Polynomial::parse(barrier, variables),
                                             delta, sample_radius, seed, n_starts));
      },
      py::arg("constraints"), py::arg("barrier"), py::arg("delta"),
      py::arg("variables"), py::arg("sample_radius"), py::arg("seed") = 42,
      py::arg("n_starts") = 300,
      "Euler characteristic of {constraints = 0, barrier >= delta}");

  m.def("predict_link_chi", &predict_link_chi, py::arg("chi_fiber"), py::arg("chi_W"),
        py::arg("n"), py::arg("l"),
        "chi of a link cut out by l components on an (n-1)-sphere world");
  m.def("invert_fiber_chi", &invert_fiber_chi, py::arg("chi_link_j"), py::arg("chi_W"),
        py::arg("n"), "fiber chi from a single-component link chi; throws on parity");

  m.def(
      "list_builtins",
      [] {
        py::list out;
        for (const auto& [name, desc] : list_builtins())
          out.append(py::make_tuple(name, desc));
        return out;
      },
      "builtin scenario names with one-line descriptions");

  m.def(
      "verify_identities",
      [](const std::string& scenario_json) {
        IdentitySummary id = verify_identities(parse_scenario_json(scenario_json));
        py::dict d;
        d["milnor_equality"] = id.milnor_equality;
        d["normalized_gradient"] = id.normalized_gradient;
        d["antisymmetry"] = id.antisymmetry;
        d["chart_samples"] = id.chart_samples;
        d["chart_failures"] = id.chart_failures;
        d["pass"] = id.pass();
        return d;
      },
      py::arg("scenario_json"), "algebraic identity suite for a scenario");

  m.def(
      "run_scenario",
      [](const std::string& scenario_json, std::optional<std::uint64_t> seed,
         std::optional<int> n_starts) {
        Scenario s = parse_scenario_json(scenario_json);
        if (seed) s.seed = *seed;
        if (n_starts) s.n_starts = *n_starts;
        RunResult r = run_scenario(s);
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["report_json"] = r.report_json;
        d["report_txt"] = r.report_txt;
        d["solutions_csv"] = r.solutions_csv;
        return d;
      },
      py::arg("scenario_json"), py::arg("seed") = py::none(),
      py::arg("n_starts") = py::none(),
      "full scenario run; report_json parses with the standard json module");

  m.def(
      "run_builtin",
      [](const std::string& name, std::optional<std::uint64_t> seed,
         std::optional<int> n_starts) {
        Scenario s = load_builtin(name);
        if (seed) s.seed = *seed;
        if (n_starts) s.n_starts = *n_starts;
        RunResult r = run_scenario(s);
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["report_json"] = r.report_json;
        d["report_txt"] = r.report_txt;
        d["solutions_csv"] = r.solutions_csv;
        return d;
      },
      py::arg("name"), py::arg("seed") = py::none(), py::arg("n_starts") = py::none(),
      "run a builtin scenario by name");
}
