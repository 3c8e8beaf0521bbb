// Copyright 2026 The pdsvqs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pdsvqs/cli.hpp"

namespace {

using namespace pdsvqs;

void add_source(CLI::App* cmd, cli::HamiltonianSource& src) {
  auto* m = cmd->add_option("--model", src.model, "built-in model: toy_a, toy_b, h2, heisenberg");
  auto* f = cmd->add_option("--file", src.file, "Hamiltonian text file");
  m->excludes(f);
  cmd->add_option("--J", src.model_options.J, "Heisenberg exchange")->capture_default_str();
  cmd->add_option("--B", src.model_options.B, "Heisenberg field")->capture_default_str();
}

void add_run_options(CLI::App* cmd, cli::RunConfig& c) {
  add_source(cmd, c.source);
  cmd->add_option("--functional", c.functional, "vqe or pds")->capture_default_str();
  cmd->add_option("--order", c.order, "PDS order K")->capture_default_str();
  cmd->add_option("--metric", c.metric, "gd, ngd or ite")->capture_default_str();
  cmd->add_option("--eta", c.eta, "step size (model default if omitted)");
  cmd->add_option("--schedule", c.schedule, "constant or inv-iter");
  cmd->add_option("--theta0", c.theta0, "comma-separated angles, e.g. \"7pi/32,pi/2,0,0\"");
  cmd->add_option("--max-iters", c.max_iters)->capture_default_str();
  cmd->add_option("--tol", c.tol, "gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--reg-moments", c.reg_moments, "none, shift or truncate");
  cmd->add_option("--reg-metric", c.reg_metric, "none, shift or truncate")->capture_default_str();
  cmd->add_option("--shift", c.shift)->capture_default_str();
  cmd->add_option("--truncate", c.truncate)->capture_default_str();
  cmd->add_option("--gradient", c.gradient, "analytic or shift")->capture_default_str();
  cmd->add_option("--shots", c.shots, "shots per group, 0 for exact")->capture_default_str();
  cmd->add_option("--seed", c.seed)->capture_default_str();
  cmd->add_option("--layers", c.layers, "template layers for --file")->capture_default_str();
  cmd->add_option("--entangler", c.entangler, "template entangler for --file")->capture_default_str();
}

std::ostream& open_or(const std::string& path, std::unique_ptr<std::ofstream>& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file = std::make_unique<std::ofstream>(path);
  if (!*file) throw InvalidArgument("cannot write '" + path + "'");
  return *file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational ground-state solver with PDS(K) energy functionals"};
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");
  app.require_subcommand(1);

  cli::RunConfig run_cfg;
  std::string run_out;
  auto* run = app.add_subcommand("run", "optimize one start and write the trajectory CSV");
  add_run_options(run, run_cfg);
  run->add_option("-o,--output", run_out, "CSV path (stdout if omitted)");

  cli::ScanConfig scan_cfg;
  std::string scan_out, surface_out;
  auto* scan = app.add_subcommand("scan", "optimize from every start of a (theta_1, theta_2) grid");
  add_run_options(scan, scan_cfg.run);
  scan->add_option("--grid", scan_cfg.grid, "starts per axis")->capture_default_str();
  scan->add_option("--surface-grid", scan_cfg.surface_grid, "surface points per axis, 0 to skip")
      ->capture_default_str();
  scan->add_option("-o,--output", scan_out, "per-start CSV path (stdout if omitted)");
  scan->add_option("--surface", surface_out, "surface CSV path");

  cli::HamiltonianSource reduce_src;
  int reduce_order = 4;
  double reduce_eps = 1e-3;
  auto* reduce = app.add_subcommand("reduce", "count unique Pauli strings in powers of H");
  add_source(reduce, reduce_src);
  reduce->add_option("--max-order", reduce_order)->capture_default_str();
  reduce->add_option("--epsilon", reduce_eps)->capture_default_str();

  cli::EstimateConfig est_cfg;
  auto* estimate = app.add_subcommand("estimate", "estimate shots for a target standard error");
  add_source(estimate, est_cfg.source);
  estimate->add_option("--epsilon", est_cfg.epsilon)->capture_default_str();
  estimate->add_option("--order", est_cfg.order, "estimate <H^order>")->capture_default_str();
  estimate->add_option("--grouping", est_cfg.grouping, "qwc or none")->capture_default_str();
  estimate->add_option("--covariance", est_cfg.covariance, "zero or bound")->capture_default_str();
  estimate->add_option("--theta", est_cfg.theta, "ansatz angles for the variances (worst case if omitted)");

  cli::HamiltonianSource eig_src;
  auto* eig = app.add_subcommand("eig", "print the exact spectrum");
  add_source(eig, eig_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*run) {
      std::unique_ptr<std::ofstream> f;
      std::ostream& csv = open_or(run_out, f, std::cout);
      return cli::cmd_run(run_cfg, csv, f ? std::cout : std::cerr);
    }
    if (*scan) {
      std::unique_ptr<std::ofstream> f, g;
      std::ostream& starts = open_or(scan_out, f, std::cout);
      std::ostream* surface = surface_out.empty() ? nullptr : &open_or(surface_out, g, std::cout);
      return cli::cmd_scan(scan_cfg, starts, surface);
    }
    if (*reduce) return cli::cmd_reduce(reduce_src, reduce_order, reduce_eps, std::cout);
    if (*estimate) return cli::cmd_estimate(est_cfg, std::cout);
    if (*eig) return cli::cmd_eig(eig_src, std::cout);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  return cli::kUsage;
}
