#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "openbook/workbench.hpp"

namespace {

openbook::Scenario resolve(const std::string& ref) {
  if (std::filesystem::exists(ref)) return openbook::load_scenario(ref);
  return openbook::load_builtin(ref);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"open book structure workbench"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;

  CLI::App* run = app.add_subcommand("run", "run a scenario and write artifacts");
  run->add_option("scenario", scenario_ref, "scenario file or builtin name")
      ->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--starts", starts, "override the multistart budget");
  run->add_option("--out", out_dir, "artifact directory (default .)");

  CLI::App* list = app.add_subcommand("list", "list builtin scenarios");

  CLI::App* verify =
      app.add_subcommand("verify-identities", "run only the algebraic identity checks");
  verify->add_option("scenario", scenario_ref, "scenario file or builtin name")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& [name, desc] : openbook::list_builtins())
        std::printf("%-16s %s\n", name.c_str(), desc.c_str());
      return 0;
    }
    openbook::Scenario s = resolve(scenario_ref);
    if (seed) s.seed = *seed;
    if (starts) s.n_starts = *starts;

    if (verify->parsed()) {
      openbook::IdentitySummary id = openbook::verify_identities(s);
      std::printf("milnor equality      %s\n", id.milnor_equality ? "pass" : "FAIL");
      std::printf("normalized gradient  %s\n", id.normalized_gradient ? "pass" : "FAIL");
      std::printf("antisymmetry         %s\n", id.antisymmetry ? "pass" : "FAIL");
      std::printf("chart samples        %d (%d failures)\n", id.chart_samples,
                  id.chart_failures);
      return id.pass() ? 0 : 1;
    }

    openbook::RunResult r = openbook::run_scenario(s);
    openbook::write_artifacts(r, out_dir);
    std::fputs(r.report_txt.c_str(), stdout);
    return r.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
