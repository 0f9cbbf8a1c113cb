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

#ifndef AAIS_CLI_HPP
#define AAIS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <aais/pde.hpp>
#include <aais/train.hpp>

/**
 * \file
 * \brief Batch commands behind the `aais` executable.
 *
 * Run configs are TOML:
 * \code
 * experiment = "one-peak"
 * problem = "poisson2d-1p"      # any preset name
 * form = "product"              # or "literal-sum"
 * seeds = [1, 2, 3]
 * out = "runs"
 *
 * [network]
 * width = 20
 * depth = 4
 *
 * [train]                       # every TrainConfig field, same names
 * n_interior = 2000
 *
 * [sampler]
 * kind = "aais"                 # uniform | rad | aais
 * n_search = 10000
 *
 * [aais]                        # optional, AaisConfig fields
 * family = "student-t"
 * dof = 3
 * \endcode
 * Unknown keys, wrong types and missing required keys are errors that name the line.
 */

namespace aais::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  std::string experiment;
  std::string problem;
  PeakForm form = PeakForm::kProduct;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out = "runs";
  Eigen::Index width = 20;
  Eigen::Index depth = 7;
  TrainConfig train;
};

/// Throws ConfigError with "<source>:<line>: <message>".
RunConfig parse_run_config(std::string_view text, std::string_view source = "config");
RunConfig load_run_config(const std::filesystem::path& path);

struct FitOptions {
  std::string target;
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
  std::string kind = "student-t";
  double dof = 3.0;
  Eigen::Index samples = 1000;
};

/// Writes mixture.json, trace.jsonl and samples.csv into `out`.
int cmd_fit(const FitOptions& options, std::ostream& log, std::ostream& err);

struct SolveOptions {
  std::filesystem::path config;
  int jobs = 1;  ///< seeds trained concurrently
};

/// Writes <out>/<experiment>/<seed>/{records.jsonl, timings.jsonl, checkpoint.json, checkpoint.bin}
/// and <out>/<experiment>/summary.json.
int cmd_solve(const SolveOptions& options, std::ostream& log, std::ostream& err);

struct ExportGridOptions {
  std::string checkpoint;  ///< checkpoint header path, or "exact"
  std::string problem;
  Eigen::Index resolution = 101;
  std::string plane = "x1x2";
  double fixed = 0.0;  ///< value of the coordinates off the plane
  std::filesystem::path out;
};

/// CSV with columns (xa, xb, u, u_exact, abs_err, residual) on a resolution^2 grid over
/// [-1, 1]^2 in the chosen plane.
int cmd_export_grid(const ExportGridOptions& options, std::ostream& log, std::ostream& err);

/// Median of a non-empty list (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace aais::cli

#endif
