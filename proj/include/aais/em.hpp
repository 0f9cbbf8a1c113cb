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

#ifndef AAIS_EM_HPP
#define AAIS_EM_HPP

#include <span>

#include <aais/common.hpp>
#include <aais/mixture.hpp>
#include <aais/target.hpp>

/**
 * \file
 * \brief Importance weights, effective sample size and weighted EM steps.
 */

namespace aais {

/// Points drawn from a proposal together with their importance weights.
///
/// Raw weights w~_i = Q(X_i) / q(X_i) are kept in log space; `normalized` sums to one.
struct WeightedBatch {
  PointSet points;
  Vector log_raw;     ///< log w~_i, -inf where Q vanishes
  Vector normalized;  ///< w_i
  bool degenerate = false;  ///< every raw weight was zero; `normalized` is then uniform

  [[nodiscard]] Eigen::Index size() const { return points.cols(); }
  /// w~_i; may under- or overflow, use `log_raw` for arithmetic.
  [[nodiscard]] Vector raw() const { return exp_exact(log_raw.array()).matrix(); }
};

/// Builds a batch from log Q and log q already evaluated at `points`.
WeightedBatch make_weighted_batch(PointSet points, const Vector& log_target, const Vector& log_proposal);

/// w~_i = Q(X_i) / q(X_i) for the given points.
WeightedBatch importance_weights(const TargetDensity& target, const MixtureModel& proposal, PointSet points);

/// Draws n points from the proposal and weights them against the target.
WeightedBatch sample_weighted(const TargetDensity& target, const MixtureModel& proposal, Eigen::Index n, Rng& rng);

/// Normalized Kong estimator (sum w~)^2 / (N sum w~^2), in (0, 1].
/// Throws DegenerateBatchError when every weight is zero.
double ess(std::span<const double> raw_weights);

/// Same estimator from log weights; invariant to any common shift.
double ess_from_log(const Vector& log_raw);

double ess(const WeightedBatch& batch);

/// rho(i, m): posterior probability that component m generated point i. Rows sum to one.
Matrix responsibilities(const MixtureModel& model, const PointSet& points);

/// (v + d) / (v + (x - mu)^T Sigma^-1 (x - mu)).
double student_t_delta(const Eigen::Ref<const Vector>& x, const Vector& mean, const Matrix& cov, double dof);

/// One weighted EM step on a Gaussian mixture. Components whose new weight is zero keep their
/// parameters and get weight zero; `delete_components` removes them.
MixtureModel em_step_gaussian(const MixtureModel& model, const WeightedBatch& samples);

/// One weighted EM step on a Student-t mixture with fixed degrees of freedom.
MixtureModel em_step_student_t(const MixtureModel& model, const WeightedBatch& samples);

/// Dispatches on the model family.
MixtureModel em_step(const MixtureModel& model, const WeightedBatch& samples);

/// sum_i w_i log q(X_i).
double weighted_log_likelihood(const MixtureModel& model, const WeightedBatch& samples);

}  // namespace aais

#endif
