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

#include <aais/train.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include <aais/target.hpp>

namespace aais {

void adam_step(Vector& theta, const Vector& grad, AdamState& state, double lr, double beta1, double beta2,
               double eps) {
  if (grad.size() != theta.size()) {
    throw DimensionError("adam_step: gradient and parameter sizes differ");
  }
  if (state.t == 0 && state.m.size() == 0) {
    state.m = Vector::Zero(theta.size());
    state.v = Vector::Zero(theta.size());
  }
  if (state.m.size() != theta.size() || state.v.size() != theta.size()) {
    throw DimensionError("adam_step: state does not match parameters");
  }
  ++state.t;
  state.m = beta1 * state.m + (1.0 - beta1) * grad;
  state.v = beta2 * state.v + (1.0 - beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  theta.array() -= lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + eps);
}

const char* to_string(LbfgsStop stop) {
  switch (stop) {
    case LbfgsStop::kMaxIters:
      return "max-iters";
    case LbfgsStop::kConverged:
      return "converged";
    case LbfgsStop::kLineSearchFailed:
      return "line-search-failed";
    case LbfgsStop::kNonFinite:
      return "non-finite";
  }
  return "unknown";
}

LbfgsResult lbfgs_minimize(const Objective& objective, const Vector& theta0, const LbfgsOptions& options) {
  if (options.history < 1 || options.max_iters < 0 || !(options.lr_scale > 0.0)) {
    throw InvalidArgument("lbfgs_minimize: invalid options");
  }
  LbfgsResult result;
  result.theta = theta0;
  Vector grad(theta0.size());
  result.loss = objective(result.theta, grad);
  result.evaluations = 1;
  if (!std::isfinite(result.loss) || !grad.allFinite()) {
    result.stop = LbfgsStop::kNonFinite;
    return result;
  }

  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;
  std::deque<double> rho_hist;
  Vector candidate(theta0.size());
  Vector candidate_grad(theta0.size());
  std::vector<double> alpha;

  result.stop = LbfgsStop::kMaxIters;
  while (result.iterations < options.max_iters) {
    if (grad.norm() < options.grad_tol) {
      result.stop = LbfgsStop::kConverged;
      break;
    }
    Vector q = grad;
    alpha.assign(s_hist.size(), 0.0);
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vector direction = -q;
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      slope = -grad.squaredNorm();
    }

    double step = options.lr_scale;
    if (s_hist.empty()) {
      step *= std::min(1.0, 1.0 / grad.lpNorm<1>());
    }
    bool accepted = false;
    double candidate_loss = 0.0;
    for (int h = 0; h <= options.max_halvings; ++h) {
      candidate = result.theta + step * direction;
      candidate_loss = objective(candidate, candidate_grad);
      ++result.evaluations;
      if (std::isfinite(candidate_loss) && candidate_grad.allFinite() &&
          candidate_loss <= result.loss + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stop = LbfgsStop::kLineSearchFailed;
      break;
    }

    Vector s = candidate - result.theta;
    Vector y = candidate_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10) {
      if (static_cast<int>(s_hist.size()) == options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    result.theta = candidate;
    grad = candidate_grad;
    result.loss = candidate_loss;
    ++result.iterations;
    result.accepted_losses.push_back(result.loss);
  }
  return result;
}

void TrainConfig::validate() const {
  if (n_interior < 1 || n_boundary < 0 || n_adaptive < 1) {
    throw InvalidArgument("train: point counts must be positive");
  }
  if (n_adaptive > n_interior) {
    throw InvalidArgument("train: N_D must not exceed N_in");
  }
  if (iterations < 0 || epochs_adam_pre < 0 || epochs_opt_pre < 0 || epochs_adam < 0 || epochs_opt < 0) {
    throw InvalidArgument("train: iteration and epoch counts must be non-negative");
  }
  if (!(lr_adam > 0.0) || !(lr_opt > 0.0)) {
    throw InvalidArgument("train: learning rates must be positive");
  }
  if (!(interior_weight > 0.0) || !(boundary_weight > 0.0)) {
    throw InvalidArgument("train: loss weights must be positive");
  }
  if (lbfgs_history < 1 || test_uniform < 0 || test_per_peak < 0 || test_uniform + test_per_peak == 0) {
    throw InvalidArgument("train: invalid optimizer history or test set size");
  }
}

std::uint64_t dataset_hash(const PointSet& interior, const PointSet& boundary) {
  std::uint64_t h = 14695981039346656037ULL;
  const auto mix = [&h](const PointSet& points) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(points.data());
    const auto count = static_cast<std::size_t>(points.size()) * sizeof(double);
    for (std::size_t i = 0; i < count; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  mix(interior);
  mix(boundary);
  return h;
}

namespace {

void require_finite(const Vector& theta, double loss, const char* stage, int iteration, int epoch) {
  if (!std::isfinite(loss) || !theta.allFinite()) {
    throw Error(std::string("non-finite ") + (std::isfinite(loss) ? "parameter" : "loss") + " during " + stage +
                " of iteration " + std::to_string(iteration) + ", epoch " + std::to_string(epoch));
  }
}

// Adam epochs then L-BFGS epochs on a fixed dataset. Adam moments start fresh.
void train_stage(MlpParams& params, const LossSpec& spec, const TrainConfig& cfg, int adam_epochs,
                 int opt_epochs, int iteration) {
  Vector theta = params.flatten();
  Vector grad(theta.size());
  AdamState state;
  for (int e = 0; e < adam_epochs; ++e) {
    const double value = loss_and_gradient(params, spec, grad);
    require_finite(grad, value, "adam", iteration, e);
    adam_step(theta, grad, state, cfg.lr_adam);
    require_finite(theta, 0.0, "adam", iteration, e);
    params.assign(theta);
  }
  if (opt_epochs > 0) {
    MlpParams scratch = params;
    const Objective objective = [&](const Vector& th, Vector& g) {
      scratch.assign(th);
      return loss_and_gradient(scratch, spec, g);
    };
    LbfgsOptions options;
    options.max_iters = opt_epochs;
    options.history = cfg.lbfgs_history;
    options.lr_scale = cfg.lr_opt;
    const LbfgsResult result = lbfgs_minimize(objective, theta, options);
    if (result.stop == LbfgsStop::kNonFinite) {
      throw Error("non-finite loss at the start of lbfgs in iteration " + std::to_string(iteration));
    }
    require_finite(result.theta, result.loss, "lbfgs", iteration, result.iterations);
    params.assign(result.theta);
  }
}

}  // namespace

TrainResult resample_train(const PoissonProblem& problem, const std::vector<Eigen::Index>& sizes,
                           const TrainConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  if (sizes.empty() || sizes.front() != problem.dim()) {
    throw DimensionError("network input size must equal the problem dimension");
  }
  const auto start = std::chrono::steady_clock::now();
  Rng init_rng = make_rng(cfg.seed, "init");
  Rng data_rng = make_rng(cfg.seed, "data");
  Rng sampler_rng = make_rng(cfg.seed, "sampler");
  Rng test_rng = make_rng(cfg.seed, "test");

  TrainResult out{init_params(sizes, init_rng), {}, 0.0};
  const TestSet test =
      build_test_set(problem, cfg.test_uniform, cfg.test_per_peak, default_test_sigma(problem), test_rng);

  PointSet interior = sample_interior(problem, cfg.n_interior, data_rng);
  PointSet boundary = sample_boundary(problem, cfg.n_boundary, data_rng);
  const auto make_spec = [&]() {
    return LossSpec{problem, interior, Vector::Constant(cfg.n_interior, cfg.interior_weight), boundary,
                    Vector::Constant(cfg.n_boundary, cfg.boundary_weight)};
  };

  const auto record = [&](int iteration, const LossSpec& spec, std::optional<Proposal> proposal) {
    IterationRecord entry;
    entry.iteration = iteration;
    entry.loss = loss(out.params, spec);
    const Metrics metrics = compute_metrics(MlpField(out.params), test);
    entry.e_r = metrics.relative_l2;
    entry.e_inf = metrics.max_abs;
    entry.dataset_hash = dataset_hash(interior, boundary);
    if (proposal) {
      entry.rad_fallback = proposal->fallback;
      entry.proposal = std::move(proposal->mixture);
      entry.trace = std::move(proposal->trace);
    }
    entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (hooks.on_record) {
      hooks.on_record(entry);
    }
    out.record.entries.push_back(std::move(entry));
  };

  if (hooks.on_dataset) {
    hooks.on_dataset(0, interior, boundary);
  }
  {
    const LossSpec spec = make_spec();
    out.initial_loss = loss(out.params, spec);
    train_stage(out.params, spec, cfg, cfg.epochs_adam_pre, cfg.epochs_opt_pre, 0);
    record(0, spec, std::nullopt);
  }

  const Eigen::Index keep = cfg.n_interior - cfg.n_adaptive;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cfg.n_interior));
  for (int it = 1; it <= cfg.iterations; ++it) {
    const MlpField field(out.params);
    const ResidualTarget target(field, problem);
    Proposal proposal = propose_points(cfg.sampler, target, cfg.n_adaptive, sampler_rng);

    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), data_rng);
    PointSet next(problem.dim(), cfg.n_interior);
    for (Eigen::Index i = 0; i < keep; ++i) {
      next.col(i) = interior.col(order[static_cast<std::size_t>(i)]);
    }
    next.rightCols(cfg.n_adaptive) = proposal.points;
    interior = std::move(next);
    boundary = sample_boundary(problem, cfg.n_boundary, data_rng);
    if (hooks.on_dataset) {
      hooks.on_dataset(it, interior, boundary);
    }

    const LossSpec spec = make_spec();
    train_stage(out.params, spec, cfg, cfg.epochs_adam, cfg.epochs_opt, it);
    record(it, spec, std::move(proposal));
  }
  return out;
}

}  // namespace aais
