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

#include <aais/target.hpp>

#include <cmath>
#include <limits>

namespace aais {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Vector TargetDensity::log_evaluate(const PointSet& points) const {
  require_dim(dim(), points.rows(), "TargetDensity::log_evaluate");
  std::vector<Eigen::Index> inside;
  inside.reserve(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    if (domain_.contains(points.col(i))) {
      inside.push_back(i);
    }
  }
  Vector out = Vector::Constant(points.cols(), kNegInf);
  if (inside.empty()) {
    return out;
  }
  if (static_cast<Eigen::Index>(inside.size()) == points.cols()) {
    return log_evaluate_inside(points);
  }
  PointSet subset(points.rows(), static_cast<Eigen::Index>(inside.size()));
  for (std::size_t k = 0; k < inside.size(); ++k) {
    subset.col(static_cast<Eigen::Index>(k)) = points.col(inside[k]);
  }
  const Vector values = log_evaluate_inside(subset);
  for (std::size_t k = 0; k < inside.size(); ++k) {
    out(inside[k]) = values(static_cast<Eigen::Index>(k));
  }
  return out;
}

Vector TargetDensity::evaluate(const PointSet& points) const { return exp_exact(log_evaluate(points).array()).matrix(); }

double TargetDensity::operator()(const Eigen::Ref<const Vector>& x) const {
  const PointSet point = x;
  return evaluate(point)(0);
}

GaussianPeaksTarget::GaussianPeaksTarget(BoxDomain domain, std::vector<Vector> centers, double sharpness)
    : TargetDensity(std::move(domain)), centers_(std::move(centers)), sharpness_(sharpness) {
  if (centers_.empty() || !(sharpness_ > 0.0)) {
    throw InvalidArgument("GaussianPeaksTarget: need at least one center and positive sharpness");
  }
  for (const auto& c : centers_) {
    require_dim(dim(), c.size(), "GaussianPeaksTarget center");
  }
}

Vector GaussianPeaksTarget::log_evaluate_inside(const PointSet& points) const {
  Matrix terms(static_cast<Eigen::Index>(centers_.size()), points.cols());
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    terms.row(static_cast<Eigen::Index>(i)) = -sharpness_ * (points.colwise() - centers_[i]).colwise().squaredNorm();
  }
  return log_sum_exp_columns(terms);
}

FunctionTarget::FunctionTarget(BoxDomain domain, std::function<double(const Vector&)> density)
    : TargetDensity(std::move(domain)), density_(std::move(density)) {}

Vector FunctionTarget::log_evaluate_inside(const PointSet& points) const {
  Vector out(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double q = density_(points.col(i));
    if (!(q >= 0.0)) {
      throw InvalidArgument("FunctionTarget: density must be non-negative");
    }
    out(i) = std::log(q);
  }
  return out;
}

MixtureTarget::MixtureTarget(BoxDomain domain, MixtureModel model, double scale)
    : TargetDensity(std::move(domain)), model_(std::move(model)), log_scale_(std::log(scale)) {
  require_dim(dim(), model_.dim(), "MixtureTarget");
  if (!(scale > 0.0)) {
    throw InvalidArgument("MixtureTarget: scale must be positive");
  }
}

Vector MixtureTarget::log_evaluate_inside(const PointSet& points) const {
  return (model_.log_density(points).array() + log_scale_).matrix();
}

AnnealedTarget::AnnealedTarget(MixtureModel proposal, const TargetDensity& base, double lambda)
    : TargetDensity(base.domain()), proposal_(std::move(proposal)), base_(base), lambda_(lambda) {
  require_dim(base.dim(), proposal_.dim(), "AnnealedTarget");
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) {
    throw InvalidArgument("AnnealedTarget: lambda must lie in [0, 1]");
  }
}

Vector AnnealedTarget::combine(const Vector& log_proposal, const Vector& log_base) const {
  require_dim(log_proposal.size(), log_base.size(), "AnnealedTarget::combine");
  // The exponents are special-cased so that 0 * (-inf) never appears.
  if (lambda_ == 1.0) {
    return log_base;
  }
  const Vector floored = log_proposal.cwiseMax(kLogProposalFloor);
  if (lambda_ == 0.0) {
    return floored;
  }
  return ((1.0 - lambda_) * floored.array() + lambda_ * log_base.array()).matrix();
}

Vector AnnealedTarget::log_evaluate_inside(const PointSet& points) const {
  if (lambda_ == 1.0) {
    return base_.log_evaluate(points);
  }
  const Vector log_q = proposal_.log_density(points);
  if (lambda_ == 0.0) {
    return combine(log_q, log_q);
  }
  return combine(log_q, base_.log_evaluate(points));
}

ResidualTarget::ResidualTarget(const Field& field, const PdeProblem& problem)
    : TargetDensity(problem.domain()), field_(field), problem_(problem) {
  require_dim(problem.dim(), field.dim(), "ResidualTarget");
}

Vector ResidualTarget::log_evaluate_inside(const PointSet& points) const {
  const Vector residual = problem_.interior_operator(field_, points);
  return (2.0 * residual.array().abs().log()).matrix();
}

ResidualTarget residual_target(const Field& field, const PdeProblem& problem) { return {field, problem}; }

std::vector<std::string> synthetic_target_names() { return {"one-peak-2d", "two-peak-2d", "nine-peak-2d"}; }

std::unique_ptr<GaussianPeaksTarget> make_synthetic_target(std::string_view name) {
  constexpr double kSharpness = 1000.0;
  auto domain = BoxDomain::symmetric_unit(2);
  const auto point = [](double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
  };
  if (name == "one-peak-2d") {
    return std::make_unique<GaussianPeaksTarget>(domain, std::vector<Vector>{point(0.5, 0.5)}, kSharpness);
  }
  if (name == "two-peak-2d") {
    return std::make_unique<GaussianPeaksTarget>(domain, std::vector<Vector>{point(0.5, 0.5), point(-0.5, -0.5)},
                                                 kSharpness);
  }
  if (name == "nine-peak-2d") {
    return std::make_unique<GaussianPeaksTarget>(domain, nine_peak_centers(), kSharpness);
  }
  throw InvalidArgument("unknown target: " + std::string(name));
}

}  // namespace aais
