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

#ifndef AAIS_TRAIN_HPP
#define AAIS_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <aais/common.hpp>
#include <aais/pde.hpp>
#include <aais/pinn.hpp>
#include <aais/samplers.hpp>

namespace aais {

struct AdamState {
  Vector m;
  Vector v;
  std::int64_t t = 0;
};

/// One bias-corrected Adam update of `theta` in place. A fresh (empty) state is sized on
/// first use.
void adam_step(Vector& theta, const Vector& grad, AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

/// Writes the gradient at `theta` into `grad` and returns the loss.
using Objective = std::function<double(const Vector& theta, Vector& grad)>;

struct LbfgsOptions {
  int max_iters = 100;
  int history = 10;
  double lr_scale = 1.0;  ///< initial line-search step
  double grad_tol = 1e-10;
  int max_halvings = 20;
  double armijo = 1e-4;
};

enum class LbfgsStop { kMaxIters, kConverged, kLineSearchFailed, kNonFinite };

const char* to_string(LbfgsStop stop);

struct LbfgsResult {
  Vector theta;
  double loss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStop stop = LbfgsStop::kMaxIters;
  std::vector<double> accepted_losses;  ///< loss after every accepted step
};

/// Two-loop-recursion L-BFGS with backtracking Armijo line search. The first step is
/// additionally scaled by min(1, 1 / |g|_1). Curvature pairs with s'y <= 1e-10 are skipped.
/// Never returns a point with a larger loss than `theta0`.
LbfgsResult lbfgs_minimize(const Objective& objective, const Vector& theta0, const LbfgsOptions& options);

struct TrainConfig {
  Eigen::Index n_interior = 2000;  ///< N_in
  Eigen::Index n_boundary = 500;   ///< N_b
  Eigen::Index n_adaptive = 500;   ///< N_D
  int iterations = 5;              ///< M
  int epochs_adam_pre = 500;
  int epochs_opt_pre = 1000;
  int epochs_adam = 500;
  int epochs_opt = 1000;
  double lr_adam = 1e-4;
  double lr_opt = 0.3;
  int lbfgs_history = 10;
  SamplerSpec sampler = UniformSampler{};
  std::uint64_t seed = 0;
  double interior_weight = 1.0;
  double boundary_weight = 1.0;
  Eigen::Index test_uniform = 5000;
  Eigen::Index test_per_peak = 1000;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;  ///< 0 is the pretrain stage
  double loss = 0.0;
  double e_r = 0.0;
  double e_inf = 0.0;
  std::uint64_t dataset_hash = 0;
  bool rad_fallback = false;
  std::optional<MixtureModel> proposal;
  std::optional<AaisTrace> trace;
  double wall_seconds = 0.0;  ///< since the start of the run
};

struct RunRecord {
  std::vector<IterationRecord> entries;
};

struct TrainResult {
  MlpParams params;
  RunRecord record;
  double initial_loss = 0.0;
};

/// FNV-1a over the raw bytes of both point sets.
std::uint64_t dataset_hash(const PointSet& interior, const PointSet& boundary);

/// Observer hooks for tests and progress output.
struct TrainHooks {
  std::function<void(const IterationRecord&)> on_record;
  std::function<void(int iteration, const PointSet& interior, const PointSet& boundary)> on_dataset;
};

/// Pretrain on uniform data, then M rounds of: propose N_D points from the residual density
/// of the current network, keep N_in - N_D random old interior points, redraw the boundary
/// and train again. Streams "init", "data", "sampler" and "test" of `cfg.seed` are
/// independent, so runs that differ only in the sampler share initialization and pretrain.
/// Throws Error if a parameter or loss becomes non-finite.
TrainResult resample_train(const PoissonProblem& problem, const std::vector<Eigen::Index>& sizes,
                           const TrainConfig& cfg, const TrainHooks& hooks = {});

}  // namespace aais

#endif
