// Copyright 2026 The aais-pinn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include <aais/cli.hpp>
#include <aais/kernels.hpp>

int main(int argc, char** argv) {
  using namespace aais::cli;

  CLI::App app{"Annealed adaptive importance sampling for PINN collocation"};
  app.require_subcommand(1);

  FitOptions fit;
  std::string fit_out = ".";
  auto* fit_cmd = app.add_subcommand("fit", "Fit a mixture proposal to a synthetic target");
  fit_cmd->add_option("--target", fit.target, "one-peak-2d, two-peak-2d or nine-peak-2d")->required();
  fit_cmd->add_option("--seed", fit.seed, "Random seed")->required();
  fit_cmd->add_option("--out", fit_out, "Output directory");
  fit_cmd->add_option("--kind", fit.kind, "gaussian or student-t");
  fit_cmd->add_option("--dof", fit.dof, "Student-t degrees of freedom");
  fit_cmd->add_option("--samples", fit.samples, "Rows in samples.csv");

  SolveOptions solve;
  std::string solve_config;
  auto* solve_cmd = app.add_subcommand("solve", "Run a resampling training experiment");
  solve_cmd->add_option("--config", solve_config, "TOML run config")->required();
  solve_cmd->add_option("--jobs", solve.jobs, "Seeds trained concurrently");

  ExportGridOptions grid;
  std::string grid_out;
  auto* grid_cmd = app.add_subcommand("export-grid", "Evaluate a checkpoint on a 2D grid");
  grid_cmd->add_option("--ckpt", grid.checkpoint, "Checkpoint header, or 'exact'")->required();
  grid_cmd->add_option("--problem", grid.problem, "Problem preset")->required();
  grid_cmd->add_option("--res", grid.resolution, "Points per axis");
  grid_cmd->add_option("--plane", grid.plane, "Plane, e.g. x1x2");
  grid_cmd->add_option("--fixed", grid.fixed, "Value of the other coordinates");
  grid_cmd->add_option("--out", grid_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (std::getenv("AAIS_VERBOSE") != nullptr) {
    std::cerr << "kernels: " << aais::kernels::to_string(aais::kernels::active_isa()) << '\n';
  }
  if (*fit_cmd) {
    fit.out = fit_out;
    return cmd_fit(fit, std::cout, std::cerr);
  }
  if (*solve_cmd) {
    solve.config = solve_config;
    return cmd_solve(solve, std::cout, std::cerr);
  }
  grid.out = grid_out;
  return cmd_export_grid(grid, std::cout, std::cerr);
}
