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

#include <aais/em.hpp>

#include <cmath>
#include <limits>

#include <aais/kernels.hpp>

namespace aais {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Shared E-step state: responsibilities (M x N) and squared Mahalanobis distances (M x N).
struct Posterior {
  Matrix rho;
  Matrix mahalanobis;
};

Posterior posterior(const MixtureModel& model, const PointSet& points) {
  const auto m_count = static_cast<Eigen::Index>(model.size());
  Posterior post{Matrix(m_count, points.cols()), Matrix(m_count, points.cols())};
  for (Eigen::Index m = 0; m < m_count; ++m) {
    const auto& c = model.component(static_cast<std::size_t>(m));
    const Vector maha = c.mahalanobis_sq(points);
    post.mahalanobis.row(m) = maha.transpose();
    if (c.weight() <= 0.0) {
      post.rho.row(m).setConstant(kNegInf);
    } else {
      post.rho.row(m) =
          (component_log_pdf_from_mahalanobis(model.kind(), c, maha).array() + std::log(c.weight())).transpose();
    }
  }
  const Vector log_q = log_sum_exp_columns(post.rho);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    if (std::isfinite(log_q(i))) {
      post.rho.col(i).array() -= log_q(i);
    } else {
      // Every component underflows at this point; share it by weight.
      post.rho.col(i) = model.weights().array().log().matrix();
    }
  }
  kernels::exp_inplace(static_cast<std::size_t>(post.rho.size()), post.rho.data());
  return post;
}

MixtureModel em_step_impl(const MixtureModel& model, const WeightedBatch& samples, bool student_t) {
  require_dim(model.dim(), samples.points.rows(), "em_step");
  require_dim(samples.points.cols(), samples.normalized.size(), "em_step weights");
  const PointSet& x = samples.points;
  const Posterior post = posterior(model, x);
  const double v = model.kind().dof;
  const auto d = static_cast<double>(model.dim());

  // R(m, i) = w_i rho_m(X_i)
  const Matrix resp = post.rho.array().rowwise() * samples.normalized.transpose().array();

  std::vector<MixtureComponent> next;
  next.reserve(model.size());
  double total = 0.0;
  for (std::size_t mi = 0; mi < model.size(); ++mi) {
    const auto m = static_cast<Eigen::Index>(mi);
    const auto& old = model.component(mi);
    const double alpha = resp.row(m).sum();
    if (!(alpha > 0.0)) {
      next.emplace_back(0.0, old.mean(), old.cov());
      continue;
    }
    Eigen::RowVectorXd r = resp.row(m);
    double mean_norm = alpha;
    if (student_t) {
      r.array() *= (v + d) / (v + post.mahalanobis.row(m).array());
      mean_norm = r.sum();
    }
    const Vector mean = x * r.transpose() / mean_norm;
    const Matrix centered = x.colwise() - mean;
    const Matrix cov = centered * r.asDiagonal() * centered.transpose() / alpha;
    next.emplace_back(alpha, mean, cov);
    total += alpha;
  }
  if (!(total > 0.0)) {
    throw DegenerateBatchError("em_step: all component weights vanished");
  }
  for (auto& c : next) {
    c.set_weight(c.weight() / total);
  }
  return {model.kind(), std::move(next)};
}

}  // namespace

WeightedBatch make_weighted_batch(PointSet points, const Vector& log_target, const Vector& log_proposal) {
  require_dim(points.cols(), log_target.size(), "make_weighted_batch target");
  require_dim(points.cols(), log_proposal.size(), "make_weighted_batch proposal");
  const Eigen::Index n = points.cols();
  WeightedBatch batch{std::move(points), Vector(n), Vector(n), false};
  for (Eigen::Index i = 0; i < n; ++i) {
    batch.log_raw(i) = log_target(i) - std::max(log_proposal(i), kLogProposalFloor);
  }
  const double top = n > 0 ? batch.log_raw.maxCoeff() : kNegInf;
  if (!std::isfinite(top)) {
    batch.degenerate = true;
    batch.normalized.setConstant(n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
    return batch;
  }
  batch.normalized = exp_exact(batch.log_raw.array() - top).matrix();
  batch.normalized /= batch.normalized.sum();
  return batch;
}

WeightedBatch importance_weights(const TargetDensity& target, const MixtureModel& proposal, PointSet points) {
  if (points.cols() == 0) {
    throw InvalidArgument("importance_weights: empty point set");
  }
  const Vector log_target = target.log_evaluate(points);
  const Vector log_proposal = proposal.log_density(points);
  return make_weighted_batch(std::move(points), log_target, log_proposal);
}

WeightedBatch sample_weighted(const TargetDensity& target, const MixtureModel& proposal, Eigen::Index n, Rng& rng) {
  return importance_weights(target, proposal, proposal.sample(n, rng));
}

double ess(std::span<const double> raw_weights) {
  double sum = 0.0;
  double sum_sq = 0.0;
  double top = 0.0;
  for (const double w : raw_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("ess: weights must be finite and non-negative");
    }
    top = std::max(top, w);
  }
  if (raw_weights.empty() || !(top > 0.0)) {
    throw DegenerateBatchError("degenerate weight batch");
  }
  for (const double w : raw_weights) {
    const double scaled = w / top;
    sum += scaled;
    sum_sq += scaled * scaled;
  }
  return sum * sum / (static_cast<double>(raw_weights.size()) * sum_sq);
}

double ess_from_log(const Vector& log_raw) {
  const double top = log_raw.size() > 0 ? log_raw.maxCoeff() : kNegInf;
  if (!std::isfinite(top)) {
    throw DegenerateBatchError("degenerate weight batch");
  }
  const Eigen::ArrayXd scaled = exp_exact(log_raw.array() - top);
  const double sum = scaled.sum();
  return sum * sum / (static_cast<double>(log_raw.size()) * scaled.square().sum());
}

double ess(const WeightedBatch& batch) { return ess_from_log(batch.log_raw); }

Matrix responsibilities(const MixtureModel& model, const PointSet& points) {
  return posterior(model, points).rho.transpose();
}

double student_t_delta(const Eigen::Ref<const Vector>& x, const Vector& mean, const Matrix& cov, double dof) {
  const MixtureComponent component(1.0, mean, cov);
  const PointSet point = x;
  const double maha = component.mahalanobis_sq(point)(0);
  return (dof + static_cast<double>(x.size())) / (dof + maha);
}

MixtureModel em_step_gaussian(const MixtureModel& model, const WeightedBatch& samples) {
  if (model.kind().is_student_t()) {
    throw InvalidArgument("em_step_gaussian: model is a Student-t mixture");
  }
  return em_step_impl(model, samples, false);
}

MixtureModel em_step_student_t(const MixtureModel& model, const WeightedBatch& samples) {
  if (!model.kind().is_student_t()) {
    throw InvalidArgument("em_step_student_t: model is a Gaussian mixture");
  }
  return em_step_impl(model, samples, true);
}

MixtureModel em_step(const MixtureModel& model, const WeightedBatch& samples) {
  return em_step_impl(model, samples, model.kind().is_student_t());
}

double weighted_log_likelihood(const MixtureModel& model, const WeightedBatch& samples) {
  return samples.normalized.dot(model.log_density(samples.points));
}

}  // namespace aais
