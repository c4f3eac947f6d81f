#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "curvflow/config.hpp"
#include "curvflow/errors.hpp"
#include "curvflow/runner.hpp"
#include "curvflow/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"curvflow: volume-preserving mean-curvature-type flow on radial graphs "
               "in the three space forms"};
  app.set_version_flag("--version", std::string(curvflow::version_string));
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute one experiment from a JSON config");
  run_cmd->add_option("config", config_path, "config JSON path")->required();

  auto* preview_cmd =
      app.add_subcommand("shape-preview", "emit the initial geometry snapshot only");
  std::string preview_path;
  preview_cmd->add_option("config", preview_path, "config JSON path")->required();

  int scale = 1;
  auto* verify_cmd =
      app.add_subcommand("verify", "run the fixed acceptance matrix and print the residual table");
  verify_cmd->add_option("--scale", scale,
                         "resolution divisor (1 default, 2 half, 4 quarter; tolerances h-scaled)")
      ->check(CLI::IsMember({1, 2, 4}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto cfg = curvflow::ExperimentConfig::from_file(config_path);
      return curvflow::execute(cfg, &std::cout);
    }
    if (*preview_cmd) {
      const auto cfg = curvflow::ExperimentConfig::from_file(preview_path);
      return curvflow::shape_preview(cfg, &std::cout);
    }
    if (*verify_cmd) {
      curvflow::SuiteOptions opt;
      opt.scale = scale;
      opt.log = &std::cout;
      return curvflow::verify_and_report(opt);
    }
  } catch (const curvflow::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return curvflow::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return curvflow::exit_runtime_abort;
  }
  return 0;
}
