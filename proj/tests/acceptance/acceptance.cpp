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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion that ran failed, except those named with --expect-fail. Those still print FAIL.
//
//   acceptance [--out DIR] [--configs DIR] [--report FILE] [--skip-desk] [--only N]...
//              [--expect-fail N]...

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <aais/aais.hpp>
#include <aais/cli.hpp>
#include <aais/em.hpp>
#include <aais/io.hpp>
#include <aais/pde.hpp>
#include <aais/pinn.hpp>
#include <aais/samplers.hpp>
#include <aais/target.hpp>
#include <aais/train.hpp>

#include "oracles/em_instances.hpp"
#include "oracles/oracles.hpp"

namespace fs = std::filesystem;
using namespace aais;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

// 1. ESS identities.
Outcome ess_identities() {
  double worst = 0.0;
  for (const std::size_t n : {1u, 2u, 17u, 1000u}) {
    worst = std::max(worst, std::abs(ess(std::vector<double>(n, 0.37)) - 1.0));
    for (std::size_t hot = 0; hot < n; hot += std::max<std::size_t>(1, n / 5)) {
      std::vector<double> w(n, 0.0);
      w[hot] = 4.2;
      worst = std::max(worst, std::abs(ess(w) - 1.0 / static_cast<double>(n)));
    }
  }
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(50 + 10 * trial);
    for (auto& v : w) {
      v = u(rng);
    }
    const double base = ess(w);
    for (const double c : {1e-6, 1.0, 1e6}) {
      std::vector<double> scaled = w;
      for (auto& v : scaled) {
        v *= c;
      }
      worst = std::max(worst, std::abs(ess(scaled) - base));
    }
  }
  return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

// 2. Both EM steps against the double-loop reference.
Outcome em_oracle() {
  const Eigen::Index dims[] = {1, 2, 3};
  const std::size_t counts[] = {1, 2, 4};
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index d = dims[seed % 3];
    const std::size_t m = counts[(seed / 3) % 3];
    const auto g = oracle::random_em_instance(d, m, ComponentKind::gaussian(), 1000 + seed);
    worst = std::max(worst, oracle::max_em_error(em_step_gaussian(g.model, g.batch),
                                                 oracle::em_step(oracle::NaiveMixture::from(g.model), g.batch.points,
                                                                 g.batch.normalized)));
    const auto t = oracle::random_em_instance(d, m, ComponentKind::student_t(3.0), 2000 + seed);
    worst = std::max(worst, oracle::max_em_error(em_step_student_t(t.model, t.batch),
                                                 oracle::em_step(oracle::NaiveMixture::from(t.model), t.batch.points,
                                                                 t.batch.normalized)));
  }
  return {worst <= 1e-10, "max relative error " + fmt(worst)};
}

// 3. Weighted likelihood never drops over a Gaussian EM step.
Outcome em_ascent() {
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 3);
    const auto inst = oracle::random_em_instance(d, 1 + seed % 4, ComponentKind::gaussian(), 3000 + seed);
    const double before = weighted_log_likelihood(inst.model, inst.batch);
    const double after = weighted_log_likelihood(em_step_gaussian(inst.model, inst.batch), inst.batch);
    worst = std::min(worst, after - before);
  }
  return {worst >= -1e-9, "smallest change " + fmt(worst)};
}

// 4. Default AAIS on the two-peak target.
Outcome aais_quality() {
  const auto target = make_synthetic_target("two-peak-2d");
  const AaisConfig cfg = AaisConfig::with_search_size(10000);
  // exp(-1000 |x - c|^2) is a Gaussian with sigma^2 = 1 / 2000.
  const double radius = 3.0 * std::sqrt(1.0 / 2000.0);
  std::vector<double> ess_values;
  double min_share = 1.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng = make_rng(seed, "acceptance-aais");
    const AaisResult result = run_aais(*target, cfg, rng);
    const WeightedBatch check = sample_weighted(*target, result.proposal, 10000, rng);
    ess_values.push_back(ess(check));
    const PointSet draws = result.proposal.sample(10000, rng);
    for (const auto& c : target->centers()) {
      const auto inside = ((draws.colwise() - c).colwise().norm().array() <= radius).count();
      min_share = std::min(min_share, static_cast<double>(inside) / 10000.0);
    }
  }
  const double med = cli::median(ess_values);
  return {med >= 0.8 && min_share >= 0.1,
          "median ESS " + fmt(med) + ", smallest basin share " + fmt(min_share)};
}

// 5. Input derivatives and the loss gradient against finite differences.
Outcome autodiff() {
  Rng rng(5);
  double worst_input = 0.0;
  double worst_loss = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto sizes = trial % 2 == 0 ? std::vector<Eigen::Index>{2, 8, 8, 1} : std::vector<Eigen::Index>{5, 16, 1};
    const MlpParams p = init_params(sizes, rng);
    const auto f = [&](const Vector& y) { return oracle::mlp_forward(p, y); };
    for (int k = 0; k < 3; ++k) {
      const Vector x = Vector::Random(sizes[0]);
      const InputDerivatives d = input_derivatives(p, x);
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        worst_input = std::max(worst_input, oracle::rel_diff(d.gradient(j), oracle::fd_first(f, x, j, 1e-5), 1e-3));
      }
      worst_input = std::max(worst_input, oracle::rel_diff(d.laplacian, oracle::fd_laplacian(f, x, 1e-3), 1e-3));
    }

    const PoissonProblem problem = make_preset(trial % 2 == 0 ? "poisson2d-1p" : "poisson5d-2p");
    const LossSpec spec{problem, problem.domain().sample_uniform(16, rng), {}, sample_boundary(problem, 8, rng), {}};
    const Vector grad = loss_gradient(p, spec);
    const Vector theta = p.flatten();
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta(k)));
      Vector tp = theta;
      Vector tm = theta;
      tp(k) += h;
      tm(k) -= h;
      const double fd =
          (loss(MlpParams::unflatten(sizes, tp), spec) - loss(MlpParams::unflatten(sizes, tm), spec)) / (2.0 * h);
      if (std::abs(fd) > 1e-8) {
        worst_loss = std::max(worst_loss, oracle::rel_diff(grad(k), fd));
      }
    }
  }
  return {worst_input <= 1e-5 && worst_loss <= 1e-4,
          "input derivatives " + fmt(worst_input) + ", loss gradient " + fmt(worst_loss)};
}

// 6 and 9 share the desk-scale runs.
struct DeskRun {
  TrainResult result;
  std::vector<PointSet> interior;
  std::vector<PointSet> boundary;
};

DeskRun train_seed(const cli::RunConfig& cfg, std::uint64_t seed) {
  const PoissonProblem problem = make_preset(cfg.problem, cfg.form);
  TrainConfig train = cfg.train;
  train.seed = seed;
  DeskRun run;
  TrainHooks hooks;
  hooks.on_dataset = [&](int, const PointSet& interior, const PointSet& boundary) {
    run.interior.push_back(interior);
    run.boundary.push_back(boundary);
  };
  hooks.on_record = [&](const IterationRecord& r) {
    std::cout << "  " << cfg.experiment << " seed " << seed << " iteration " << r.iteration << ": e_r " << fmt(r.e_r)
              << '\n'
              << std::flush;
  };
  run.result = resample_train(problem, mlp_sizes(problem.dim(), cfg.width, cfg.depth), train, hooks);
  return run;
}

std::set<std::vector<double>> column_set(const PointSet& x) {
  std::set<std::vector<double>> out;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    out.emplace(x.col(i).data(), x.col(i).data() + x.rows());
  }
  return out;
}

std::size_t shared_columns(const PointSet& a, const PointSet& b) {
  const auto set = column_set(a);
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    n += set.count(std::vector<double>(b.col(i).data(), b.col(i).data() + b.rows()));
  }
  return n;
}

struct DeskResults {
  cli::RunConfig aais;
  cli::RunConfig uniform;
  std::map<std::uint64_t, DeskRun> aais_runs;
  std::map<std::uint64_t, DeskRun> uniform_runs;
};

DeskResults run_desk(const fs::path& configs, const fs::path& out) {
  DeskResults desk{cli::load_run_config(configs / "one-peak-aais.toml"),
                   cli::load_run_config(configs / "one-peak-uniform.toml"),
                   {},
                   {}};
  for (auto* runs : {&desk.aais_runs, &desk.uniform_runs}) {
    const cli::RunConfig& cfg = runs == &desk.aais_runs ? desk.aais : desk.uniform;
    for (const std::uint64_t seed : cfg.seeds) {
      DeskRun run = train_seed(cfg, seed);
      const fs::path dir = out / cfg.experiment / std::to_string(seed);
      write_text(dir / "records.jsonl", records_to_jsonl(run.result.record));
      write_text(dir / "timings.jsonl", timings_to_jsonl(run.result.record));
      write_checkpoint(dir / "checkpoint.json", run.result.params);
      runs->emplace(seed, std::move(run));
    }
  }
  return desk;
}

Outcome desk_gap(const DeskResults& desk) {
  std::vector<double> a;
  std::vector<double> u;
  for (const auto& [seed, run] : desk.aais_runs) {
    a.push_back(run.result.record.entries.back().e_r);
  }
  for (const auto& [seed, run] : desk.uniform_runs) {
    u.push_back(run.result.record.entries.back().e_r);
  }
  const double ma = cli::median(a);
  const double mu = cli::median(u);
  std::string detail = "median final e_r aais " + fmt(ma) + " vs uniform " + fmt(mu) + " (aais seeds";
  for (const double v : a) {
    detail += " " + fmt(v);
  }
  detail += "; uniform seeds";
  for (const double v : u) {
    detail += " " + fmt(v);
  }
  detail += ")";
  if (ma > mu) {
    detail += "; aais above uniform";
  }
  if (ma > 0.2) {
    detail += "; aais above 0.2";
  }
  return {ma <= mu && ma <= 0.2, detail};
}

Outcome bookkeeping(const DeskResults& desk) {
  std::vector<std::string> problems;
  const auto check = [&](const cli::RunConfig& cfg, const std::map<std::uint64_t, DeskRun>& runs) {
    const auto expected_entries = static_cast<std::size_t>(cfg.train.iterations + 1);
    for (const auto& [seed, run] : runs) {
      const std::string tag = cfg.experiment + " seed " + std::to_string(seed) + ": ";
      if (run.result.record.entries.size() != expected_entries) {
        problems.push_back(tag + "record count");
      }
      if (run.interior.size() != expected_entries) {
        problems.push_back(tag + "dataset count");
        continue;
      }
      for (std::size_t k = 0; k < run.interior.size(); ++k) {
        if (run.interior[k].cols() != cfg.train.n_interior || run.boundary[k].cols() != cfg.train.n_boundary) {
          problems.push_back(tag + "dataset size at iteration " + std::to_string(k));
        }
        if (dataset_hash(run.interior[k], run.boundary[k]) != run.result.record.entries[k].dataset_hash) {
          problems.push_back(tag + "hash at iteration " + std::to_string(k));
        }
        if (k == 0) {
          continue;
        }
        if (shared_columns(run.boundary[k - 1], run.boundary[k]) != 0) {
          problems.push_back(tag + "boundary not refreshed at iteration " + std::to_string(k));
        }
        const auto kept = shared_columns(run.interior[k - 1], run.interior[k]);
        if (kept != static_cast<std::size_t>(cfg.train.n_interior - cfg.train.n_adaptive)) {
          problems.push_back(tag + "retained " + std::to_string(kept) + " points at iteration " + std::to_string(k));
        }
      }
    }
  };
  check(desk.aais, desk.aais_runs);
  check(desk.uniform, desk.uniform_runs);

  // Rerun the first seed of each sampler and compare bit for bit.
  for (const auto* cfg : {&desk.aais, &desk.uniform}) {
    const auto& runs = cfg == &desk.aais ? desk.aais_runs : desk.uniform_runs;
    const std::uint64_t seed = cfg->seeds.front();
    const DeskRun again = train_seed(*cfg, seed);
    const DeskRun& first = runs.at(seed);
    if (records_to_jsonl(again.result.record) != records_to_jsonl(first.result.record) ||
        again.result.params.flatten() != first.result.params.flatten()) {
      problems.push_back(cfg->experiment + " seed " + std::to_string(seed) + ": rerun differs");
    }
  }

  std::string detail = problems.empty() ? "datasets, records and reruns consistent" : problems.front();
  if (problems.size() > 1) {
    detail += " (+" + std::to_string(problems.size() - 1) + " more)";
  }
  return {problems.empty(), detail};
}

// 7. RAD with a constant target and with a sub-box indicator.
Outcome rad_reduction() {
  bool exact = true;
  for (const Eigen::Index n : {1, 7, 10000}) {
    const auto p = rad_probabilities(Vector::Constant(n, 2.5));
    exact = exact && p && (p->array() == 1.0 / static_cast<double>(n)).all();
  }
  Rng rng(7);
  const auto constant = FunctionTarget(BoxDomain::symmetric_unit(2), [](const Vector&) { return 3.0; });
  const Proposal flat = propose_points(RadSampler{10000}, constant, 500, rng);

  const auto in_box = [](const Vector& x) { return x(0) > 0.2 && x(0) < 0.8 && x(1) > -0.6 && x(1) < 0.2; };
  const FunctionTarget indicator(BoxDomain::symmetric_unit(2), [&](const Vector& x) { return in_box(x) ? 1.0 : 0.0; });
  Eigen::Index outside = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng r = make_rng(seed, "acceptance-rad");
    const Proposal p = propose_points(RadSampler{10000}, indicator, 500, r);
    for (Eigen::Index i = 0; i < p.points.cols(); ++i) {
      outside += in_box(p.points.col(i)) ? 0 : 1;
    }
  }
  return {exact && !flat.fallback && flat.points.cols() == 500 && outside == 0,
          std::string(exact ? "constant target exactly 1/N_S" : "constant target not uniform") + ", " +
              std::to_string(outside) + " selections outside the sub-box"};
}

// 8. Exact solution residual and source term for every preset.
Outcome exact_residual() {
  double worst_residual = 0.0;
  double worst_source = 0.0;
  for (const auto& name : preset_names()) {
    const PoissonProblem problem = make_preset(name);
    const ExactSolutionField exact(problem);
    Rng rng = make_rng(8, name);
    const PointSet x = problem.domain().sample_uniform(100, rng);
    const ResidualTarget target = residual_target(exact, problem);
    worst_residual = std::max(worst_residual, target.evaluate(x).maxCoeff());

    // Half the points near the peaks, where the source term is not negligible.
    const double sigma = default_test_sigma(problem);
    std::normal_distribution<double> normal(0.0, 2.0 * sigma);
    PointSet y = problem.domain().sample_uniform(1000, rng);
    for (Eigen::Index i = 0; i < y.cols(); i += 2) {
      const auto& c = problem.centers()[static_cast<std::size_t>(i / 2) % problem.centers().size()];
      for (Eigen::Index j = 0; j < problem.dim(); ++j) {
        y(j, i) = std::clamp(c(j) + normal(rng), -0.999, 0.999);
      }
    }
    const auto u = [&](const Vector& p) { return problem.exact_solution(p); };
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
      const double f = problem.source_term(y.col(i));
      const double fd = -oracle::fd_laplacian(u, y.col(i), 0.02 * sigma);
      worst_source = std::max(worst_source, oracle::rel_diff(f, fd, 1.0));
    }
  }
  return {worst_residual < 1e-8 && worst_source <= 1e-4,
          "max residual density " + fmt(worst_residual) + ", source vs FD " + fmt(worst_source)};
}

// 10. Delete and blend arithmetic.
Outcome delete_update() {
  Rng rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_sum = 0.0;
  bool blend_exact = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
    std::vector<double> raw(m);
    double total = 0.0;
    for (auto& w : raw) {
      w = u(rng) * (trial % 3 == 0 ? 0.02 : 1.0);
      total += w;
    }
    std::vector<MixtureComponent> comps;
    for (std::size_t k = 0; k < m; ++k) {
      Vector mean = Vector::Constant(2, -0.9 + 0.2 * static_cast<double>(k));
      comps.emplace_back(raw[k] / total, mean, Matrix::Identity(2, 2) * 1e-3);
    }
    const MixtureModel model(ComponentKind::student_t(3.0), comps);
    const MixtureModel kept = delete_components(model, m, 0.01 * (1 + trial % 20));
    worst_sum = std::max(worst_sum, std::abs(kept.weights().sum() - 1.0));

    AaisConfig cfg = AaisConfig::with_search_size(1000);
    cfg.blend = 0.25 + 0.5 * u(rng);
    const MixtureModel far = MixtureModel::single(model.kind(), Vector::Constant(2, 0.95), Matrix::Identity(2, 2) * 1e-4);
    const UpdateResult r = update_proposal(model, far, cfg, rng);
    if (r.merged || r.model.size() != m + 1 || r.model.component(m).weight() != 1.0 - cfg.blend) {
      blend_exact = false;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) {
      blend_exact = blend_exact && r.model.component(k).weight() == cfg.blend * model.component(k).weight();
    }
  }
  return {worst_sum <= 1e-12 && blend_exact,
          "post-delete weight sum off by " + fmt(worst_sum) + (blend_exact ? ", blend exact" : ", blend inexact")};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_runs";
  fs::path configs = fs::path(AAIS_SOURCE_DIR) / "configs";
  fs::path report;
  bool skip_desk = false;
  std::set<int> only;
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else if (arg == "--configs" && i + 1 < argc) {
      configs = argv[++i];
    } else if (arg == "--report" && i + 1 < argc) {
      report = argv[++i];
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      expect_fail.insert(std::stoi(argv[++i]));
    } else if (arg == "--skip-desk") {
      skip_desk = true;
    } else if (arg == "--only" && i + 1 < argc) {
      only.insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--out DIR] [--configs DIR] [--report FILE] [--skip-desk] [--only N]... "
                   "[--expect-fail N]...\n";
      return 2;
    }
  }
  const auto wanted = [&](int n) { return only.empty() || only.count(n) != 0; };

  std::map<int, Outcome> outcomes;
  std::map<int, double> seconds;
  const auto run = [&](int n, const std::function<Outcome()>& body) {
    if (!wanted(n)) {
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      outcomes[n] = body();
    } catch (const std::exception& e) {
      outcomes[n] = {false, std::string("threw: ") + e.what()};
    }
    seconds[n] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  run(1, ess_identities);
  run(2, em_oracle);
  run(3, em_ascent);
  run(4, aais_quality);
  run(5, autodiff);
  run(7, rad_reduction);
  run(8, exact_residual);
  run(10, delete_update);

  if (!skip_desk && (wanted(6) || wanted(9))) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const DeskResults desk = run_desk(configs, out);
      const double train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      run(6, [&] { return desk_gap(desk); });
      seconds[6] = train_seconds;
      run(9, [&] { return bookkeeping(desk); });
    } catch (const std::exception& e) {
      for (const int n : {6, 9}) {
        if (wanted(n)) {
          outcomes[n] = {false, std::string("threw: ") + e.what()};
        }
      }
    }
  }

  bool ok = true;
  std::ostringstream lines;
  for (int n = 1; n <= 10; ++n) {
    if (!wanted(n)) {
      continue;
    }
    const auto it = outcomes.find(n);
    if (it == outcomes.end()) {
      lines << "criterion " << n << ": SKIP\n";
      continue;
    }
    const bool expected = expect_fail.count(n) != 0;
    ok = ok && (it->second.pass || expected);
    lines << "criterion " << n << ": " << (it->second.pass ? "PASS" : "FAIL") << "  " << it->second.detail << "  ["
          << fmt(seconds[n]) << " s]" << (!it->second.pass && expected ? "  (expected failure)" : "") << '\n';
  }
  std::cout << lines.str();
  if (!report.empty()) {
    std::ofstream(report) << lines.str();
  }
  return ok ? 0 : 1;
}
