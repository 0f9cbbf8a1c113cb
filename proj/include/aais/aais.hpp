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

#ifndef AAIS_AAIS_HPP
#define AAIS_AAIS_HPP

#include <optional>
#include <vector>

#include <aais/common.hpp>
#include <aais/em.hpp>
#include <aais/mixture.hpp>
#include <aais/target.hpp>

/**
 * \file
 * \brief Annealed adaptive importance sampling with Gaussian or Student-t mixtures.
 *
 * The sampler grows a mixture proposal q towards an unnormalized target Q. It starts from a
 * single component at the best of N_S uniform search points, then walks a ladder of annealed
 * targets q^(1 - lambda_k) Q^lambda_k. On every rung it repeatedly adds a candidate
 * component at the largest importance weight, merges or blends it into q, runs EM and drops
 * negligible components, until the ESS reaches the rung's threshold.
 */

namespace aais {

/// How a candidate is folded into an existing component when the merge test fires.
enum class MergeRule {
  kMomentMatched,  ///< equal-weight moment matching of the two components
  kSummed,        ///< mean and covariance sums, mu_m + mu*, Sigma_m + Sigma*
};

struct AaisConfig {
  Eigen::Index n_search = 10000;   ///< N_S, uniform search points for the initial proposal
  Eigen::Index n_proposal = 1000;  ///< N_A, points drawn from the proposal per iteration
  Eigen::Index n_refine = 100;     ///< n, points per candidate refinement / merge test
  double accept_ess = 0.15;        ///< T_a
  double merge_ess = 0.85;         ///< T_m
  double delete_fraction = 0.01;   ///< T_d = delete_fraction / M
  double blend = 0.5;              ///< sigma, weight kept by the old proposal in a blend
  /// Keep the N_S uniform search points (and their target values) and pool them with every
  /// iterate's N_A proposal draws when estimating ESS and locating the next candidate, using
  /// balance-heuristic weights against (N_A q + N_S U) / (N_A + N_S). Off: proposal draws only.
  bool reuse_search_points = true;
  int refine_cycles = 10;          ///< C_u
  std::vector<double> lambdas{0.7, 0.9, 1.0};
  std::vector<double> ess_targets{0.9, 0.88, 0.85};
  std::vector<int> rung_iterations{100, 100, 100};
  std::optional<Matrix> sigma0;  ///< defaults to default_sigma0(d, n_refine)
  ComponentKind kind = ComponentKind::student_t(3.0);
  MergeRule merge_rule = MergeRule::kMomentMatched;

  /// N_A = floor(0.1 N_S), n = floor(0.1 N_A).
  static AaisConfig with_search_size(Eigen::Index n_search);

  /// Throws InvalidArgument on inconsistent ladders or thresholds.
  void validate() const;
  [[nodiscard]] Matrix initial_covariance(Eigen::Index dim) const;
};

/// Diagonal initial covariance: 100 / n^2 when d < 2, 0.1 otherwise.
Matrix default_sigma0(Eigen::Index dim, Eigen::Index n_refine);

/// One record per proposal iterate.
struct AaisIteration {
  int rung = 0;          ///< 1-based ladder index
  int iteration = 0;     ///< 0 at rung entry, then one per added candidate
  double lambda = 1.0;
  double ess = 0.0;        ///< ESS(Q_k; q^t) against the rung target
  double ess_final = 0.0;  ///< ESS(Q_I; q^t) against the final-rung target
  std::size_t components = 0;
};

struct AaisTrace {
  std::vector<AaisIteration> iterations;
  std::size_t best = 0;  ///< index into `iterations` maximizing ess_final
  int initial_cycles = 0;
  bool degenerate_candidate = false;  ///< some candidate had to be seeded at a random point
};

struct AaisResult {
  MixtureModel proposal;
  AaisTrace trace;
};

/// Outcome of a refinement loop, for inspection in tests.
struct RefineResult {
  MixtureModel model;
  int cycles = 0;        ///< sample/EM passes executed
  double last_ess = 0.0;  ///< ESS measured on the final pass, before its EM step
  bool degenerate = false;
};

/// Initial single-component proposal from uniform search points.
/// Throws DegenerateBatchError("flat target on search set") if Q vanishes on all of them.
RefineResult initial_proposal(const TargetDensity& target, const AaisConfig& cfg, Rng& rng);

/// Candidate component at the largest weight of `search`, refined against `target`.
RefineResult spawn_candidate(const TargetDensity& target, const WeightedBatch& search, const AaisConfig& cfg,
                             Rng& rng);

/// Same, drawing the N_A search points from `proposal` first.
RefineResult spawn_candidate(const TargetDensity& target, const MixtureModel& proposal, const AaisConfig& cfg,
                             Rng& rng);

/// Merge test and merge/blend of a one-component candidate into `proposal`.
struct UpdateResult {
  MixtureModel model;
  bool merged = false;
  std::size_t merged_into = 0;
  Vector scores;  ///< alpha_m ESS(p_m; p*) per component
};
UpdateResult update_proposal(const MixtureModel& proposal, const MixtureModel& candidate, const AaisConfig& cfg,
                             Rng& rng);

/// Drops components with weight < delete_fraction / M and renormalizes; keeps the largest
/// component alone if none survive.
MixtureModel delete_components(const MixtureModel& model, std::size_t current_count, double delete_fraction = 0.01);

/// Full annealed loop. Returns the iterate with the highest ESS against the final target.
AaisResult run_aais(const TargetDensity& target, const AaisConfig& cfg, Rng& rng);

}  // namespace aais

#endif
