// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "odcsgd/config.hpp"
#include "odcsgd/errors.hpp"
#include "odcsgd/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  int threads = -1;
};

odcsgd::RunConfig load(const CommonOptions& opts) {
  odcsgd::RunConfig config = odcsgd::parse_config(opts.config_path);
  odcsgd::apply_environment(config);
  if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
  if (opts.threads >= 0) config.threads = opts.threads;
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("config", opts.config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--output-dir", opts.output_dir, "Output directory (overrides config and ODCSGD_OUTPUT_DIR)");
  cmd->add_option("-j,--threads", opts.threads, "Worker threads (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online distributed clipped SGD simulator and bound verifier"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool no_checks = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate every seed, write CSVs and evaluate the checks");
  add_common(run_cmd, run_opts);
  run_cmd->add_flag("--no-checks", no_checks, "Skip the bound checks");

  CommonOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "Evaluate the bound checks without writing CSVs");
  add_common(verify_cmd, verify_opts);

  CommonOptions sweep_opts;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per value of a parameter axis");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis, "alpha, kappa, noise.scale, noise.kind, T or N")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    bool ok = true;
    if (*run_cmd) {
      const auto config = load(run_opts);
      odcsgd::ExperimentOptions options;
      options.run_checks = !no_checks;
      const auto report = odcsgd::run_experiment(config, options);
      odcsgd::write_summary_csv(config.output_dir / (config.name + "_summary.csv"), report);
      std::cout << odcsgd::format_report(report) << odcsgd::format_checks(report);
      ok = report.all_passed();
    } else if (*verify_cmd) {
      const auto config = load(verify_opts);
      odcsgd::ExperimentOptions options;
      options.write_csv = false;
      const auto report = odcsgd::run_experiment(config, options);
      std::cout << odcsgd::format_checks(report);
      ok = report.all_passed();
    } else if (*sweep_cmd) {
      const auto config = load(sweep_opts);
      const auto reports = odcsgd::sweep(config, axis, values);
      for (std::size_t k = 0; k < reports.size(); ++k) {
        std::cout << "== " << axis << " = " << values[k] << '\n'
                  << odcsgd::format_report(reports[k]) << odcsgd::format_checks(reports[k]);
        odcsgd::write_summary_csv(reports[k].config.output_dir / (config.name + "_summary.csv"), reports[k]);
        ok = ok && reports[k].all_passed();
      }
    }
    return ok ? 0 : 1;
  } catch (const odcsgd::NonFiniteState& e) {
    std::cerr << "error: " << e.what() << " (seed " << e.seed() << ", step " << e.step() << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
