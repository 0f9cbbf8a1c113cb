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

#include <aais/cli.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include <aais/io.hpp>
#include <aais/samplers.hpp>
#include <aais/target.hpp>

namespace aais::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    out += out.empty() ? n : ", " + n;
  }
  return out;
}

Json stats(const std::vector<double>& values) {
  return Json{{"median", median(values)},
              {"min", *std::min_element(values.begin(), values.end())},
              {"max", *std::max_element(values.begin(), values.end())}};
}

// "xAxB" with 1-based axis numbers.
std::pair<Eigen::Index, Eigen::Index> parse_plane(const std::string& plane, Eigen::Index dim) {
  const auto second = plane.find('x', 1);
  if (plane.size() < 4 || plane[0] != 'x' || second == std::string::npos) {
    throw InvalidArgument("plane must look like x1x2");
  }
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    a = std::stol(plane.substr(1, second - 1), &used_a);
    b = std::stol(plane.substr(second + 1), &used_b);
    if (used_a != second - 1 || used_b != plane.size() - second - 1) {
      throw InvalidArgument("plane");
    }
  } catch (const std::exception&) {
    throw InvalidArgument("plane must look like x1x2");
  }
  if (a < 1 || b < 1 || a > dim || b > dim || a == b) {
    throw InvalidArgument("plane axes must be distinct and within 1.." + std::to_string(dim));
  }
  return {a - 1, b - 1};
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidArgument("median of an empty list");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int cmd_fit(const FitOptions& options, std::ostream& log, std::ostream& err) {
  const auto names = synthetic_target_names();
  if (std::find(names.begin(), names.end(), options.target) == names.end()) {
    err << "error: unknown target '" << options.target << "' (known: " << join(names) << ")\n";
    return kUsage;
  }
  AaisConfig cfg;
  if (options.kind == "gaussian") {
    cfg.kind = ComponentKind::gaussian();
  } else if (options.kind == "student-t") {
    if (!(options.dof > 2.0)) {
      err << "error: --dof must exceed 2\n";
      return kUsage;
    }
    cfg.kind = ComponentKind::student_t(options.dof);
  } else {
    err << "error: --kind must be gaussian or student-t\n";
    return kUsage;
  }
  if (options.samples < 1) {
    err << "error: --samples must be positive\n";
    return kUsage;
  }
  try {
    const auto target = make_synthetic_target(options.target);
    Rng rng = make_rng(options.seed, "fit");
    const AaisResult fit = run_aais(*target, cfg, rng);
    const PointSet samples = sample_inside(fit.proposal, target->domain(), options.samples, rng);
    write_text(options.out / "mixture.json", mixture_to_json(fit.proposal));
    write_text(options.out / "trace.jsonl", trace_to_jsonl(fit.trace));
    write_text(options.out / "samples.csv", points_csv(samples));
    const auto& best = fit.trace.iterations[fit.trace.best];
    log << "fit " << options.target << ": " << fit.proposal.size() << " components, ESS " << best.ess_final
        << " (rung " << best.rung << ", iteration " << best.iteration << ")\n";
    if (fit.trace.degenerate_candidate) {
      log << "note: some candidates were seeded at random points (all weights zero)\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

int cmd_solve(const SolveOptions& options, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(options.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const PoissonProblem problem = make_preset(cfg.problem, cfg.form);
  const auto sizes = mlp_sizes(problem.dim(), cfg.width, cfg.depth);
  const std::filesystem::path root = cfg.out / cfg.experiment;

  std::vector<std::optional<IterationRecord>> finals(cfg.seeds.size());
  std::vector<std::string> failures(cfg.seeds.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t k = next++; k < cfg.seeds.size(); k = next++) {
      const std::uint64_t seed = cfg.seeds[k];
      try {
        TrainConfig train = cfg.train;
        train.seed = seed;
        TrainHooks hooks;
        hooks.on_record = [&](const IterationRecord& r) {
          const std::lock_guard lock(log_mutex);
          log << "seed " << seed << " iteration " << r.iteration << ": loss " << r.loss << ", e_r " << r.e_r
              << ", e_inf " << r.e_inf << '\n';
        };
        const TrainResult result = resample_train(problem, sizes, train, hooks);
        const std::filesystem::path dir = root / std::to_string(seed);
        write_text(dir / "records.jsonl", records_to_jsonl(result.record));
        write_text(dir / "timings.jsonl", timings_to_jsonl(result.record));
        write_checkpoint(dir / "checkpoint.json", result.params);
        finals[k] = result.record.entries.back();
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(cfg.seeds.size())));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) {
    threads.emplace_back(worker);
  }
  worker();
  for (auto& t : threads) {
    t.join();
  }

  bool ok = true;
  for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
    if (!finals[k]) {
      err << "error: seed " << cfg.seeds[k] << ": " << failures[k] << '\n';
      ok = false;
    }
  }
  if (!ok) {
    return kFailure;
  }

  std::vector<double> e_r;
  std::vector<double> e_inf;
  std::vector<double> losses;
  Json per_seed = Json::array();
  for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
    e_r.push_back(finals[k]->e_r);
    e_inf.push_back(finals[k]->e_inf);
    losses.push_back(finals[k]->loss);
    per_seed.push_back(Json{{"seed", cfg.seeds[k]}, {"e_r", e_r.back()}, {"e_inf", e_inf.back()}, {"loss", losses.back()}});
  }
  Json summary{{"experiment", cfg.experiment},
               {"problem", cfg.problem},
               {"sampler", sampler_name(cfg.train.sampler)},
               {"iterations", cfg.train.iterations},
               {"e_r", stats(e_r)},
               {"e_inf", stats(e_inf)},
               {"loss", stats(losses)},
               {"seeds", std::move(per_seed)}};
  try {
    write_text(root / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  log << cfg.experiment << ": median e_r " << median(e_r) << " over " << cfg.seeds.size() << " seeds\n";
  return kOk;
}

int cmd_export_grid(const ExportGridOptions& options, std::ostream& log, std::ostream& err) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), options.problem) == names.end()) {
    err << "error: unknown problem '" << options.problem << "' (known: " << join(names) << ")\n";
    return kUsage;
  }
  if (options.resolution < 2) {
    err << "error: --res must be at least 2\n";
    return kUsage;
  }
  try {
    const PoissonProblem problem = make_preset(options.problem);
    const auto [a, b] = parse_plane(options.plane, problem.dim());
    std::unique_ptr<Field> field;
    if (options.checkpoint == "exact") {
      field = std::make_unique<ExactSolutionField>(problem);
    } else {
      MlpParams params = read_checkpoint(options.checkpoint);
      if (params.input_dim() != problem.dim()) {
        throw DimensionError("checkpoint input size does not match the problem dimension");
      }
      field = std::make_unique<MlpField>(std::move(params));
    }

    const Eigen::Index res = options.resolution;
    PointSet points = PointSet::Constant(problem.dim(), res * res, options.fixed);
    const double h = 2.0 / static_cast<double>(res - 1);
    for (Eigen::Index j = 0; j < res; ++j) {
      for (Eigen::Index i = 0; i < res; ++i) {
        points(a, j * res + i) = -1.0 + h * static_cast<double>(i);
        points(b, j * res + i) = -1.0 + h * static_cast<double>(j);
      }
    }
    const FieldJets jets = field->jets(points);
    const Vector exact = problem.exact_values(points);
    Matrix table(points.cols(), 6);
    table.col(0) = points.row(a).transpose();
    table.col(1) = points.row(b).transpose();
    table.col(2) = jets.value;
    table.col(3) = exact;
    table.col(4) = (jets.value - exact).cwiseAbs();
    table.col(5) = problem.interior_residual(points, jets);
    const std::string xa = "x" + std::to_string(a + 1);
    const std::string xb = "x" + std::to_string(b + 1);
    write_text(options.out, csv_table({xa, xb, "u", "u_exact", "abs_err", "residual"}, table));
    log << "wrote " << points.cols() << " rows to " << options.out.string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace aais::cli
