#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cptgrowth/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Closed-form optimal terminal growth rate for a prospect-theory investor "
      "with probability distortion, plus the wealth-based reference model"};

  std::string config_path, scenario_spec, out_dir;
  bool do_check_golden = false, do_weighting_figure = false;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config; defaults reproduce the study");
  app.add_option("--scenario", scenario_spec,
                 "single cell override, e.g. c=0.3,g=0,weighting=identity");
  app.add_option("--out", out_dir, "output directory (env CPT_OUT overrides)");
  app.add_option("--jobs", jobs, "worker threads for the scenario matrix")
      ->check(CLI::PositiveNumber);
  app.add_flag("--check-golden", do_check_golden,
               "recompute the golden table, verify residuals, exit");
  app.add_flag("--weighting-figure", do_weighting_figure,
               "emit the weighting-curve CSV to stdout and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    cpt::RunManifest manifest = config_path.empty()
                                    ? cpt::default_manifest()
                                    : cpt::manifest_from_file(config_path);
    if (const char* env_out = std::getenv("CPT_OUT")) manifest.out_dir = env_out;
    if (!out_dir.empty()) manifest.out_dir = out_dir;

    if (do_weighting_figure) {
      const cpt::Scenario base =
          manifest.scenarios.empty() ? cpt::Scenario{} : manifest.scenarios.front();
      cpt::emit_weighting_figure(std::cout, base.jz, base.power_exponent);
      return 0;
    }
    if (do_check_golden) return cpt::check_golden(manifest.out_dir) ? 0 : 1;

    if (!scenario_spec.empty()) {
      const cpt::Scenario base = manifest.scenarios.empty()
                                     ? cpt::Scenario{}
                                     : manifest.scenarios.front();
      manifest.scenarios = {cpt::apply_overrides(base, scenario_spec)};
    }
    return cpt::run(manifest, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
