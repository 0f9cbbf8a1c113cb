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

#include <aais/mixture.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include <aais/kernels.hpp>

namespace aais {
namespace {

constexpr double kJitterEpsilon = 1e-8;
constexpr int kJitterRetries = 3;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ComponentKind ComponentKind::student_t(double dof) {
  if (!(dof > 2.0)) {
    throw InvalidArgument("Student-t degrees of freedom must exceed 2");
  }
  return {Family::kStudentT, dof};
}

MixtureComponent::MixtureComponent(double weight, Vector mean, Matrix cov)
    : weight_(weight), mean_(std::move(mean)), cov_(std::move(cov)) {
  const Eigen::Index d = mean_.size();
  if (cov_.rows() != d || cov_.cols() != d) {
    throw DimensionError("MixtureComponent: covariance shape does not match mean");
  }
  if (!(weight_ >= 0.0) || !std::isfinite(weight_)) {
    throw InvalidArgument("MixtureComponent: weight must be finite and non-negative");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw FactorizationError("MixtureComponent: non-finite mean or covariance");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

  Eigen::LLT<Matrix> llt(cov_);
  if (llt.info() != Eigen::Success) {
    const double trace = cov_.trace();
    const double scale = trace > 0.0 ? trace / static_cast<double>(d) : 1.0;
    double jitter = kJitterEpsilon * scale;
    for (int attempt = 0; attempt < kJitterRetries && llt.info() != Eigen::Success; ++attempt) {
      cov_.diagonal().array() += jitter;
      llt.compute(cov_);
      jitter *= 10.0;
    }
    if (llt.info() != Eigen::Success) {
      throw FactorizationError("MixtureComponent: covariance is not positive definite after jitter");
    }
    regularized_ = true;
  }
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

Vector MixtureComponent::mahalanobis_sq(const PointSet& points) const {
  require_dim(dim(), points.rows(), "mahalanobis_sq");
  Matrix centered = points.colwise() - mean_;
  chol_.triangularView<Eigen::Lower>().solveInPlace(centered);
  return centered.colwise().squaredNorm().transpose();
}

Vector component_log_pdf_from_mahalanobis(const ComponentKind& kind, const MixtureComponent& component,
                                          const Vector& mahalanobis_sq) {
  const auto d = static_cast<double>(component.dim());
  if (!kind.is_student_t()) {
    const double constant = -0.5 * (d * std::log(2.0 * std::numbers::pi) + component.log_det());
    return (constant - 0.5 * mahalanobis_sq.array()).matrix();
  }
  const double v = kind.dof;
  const double constant = std::lgamma(0.5 * (v + d)) - std::lgamma(0.5 * v) -
                          0.5 * d * std::log(v * std::numbers::pi) - 0.5 * component.log_det();
  return (constant - 0.5 * (v + d) * (mahalanobis_sq.array() / v).log1p()).matrix();
}

double component_log_pdf(const ComponentKind& kind, const MixtureComponent& component,
                         const Eigen::Ref<const Vector>& x) {
  const PointSet point = x;
  return component_log_pdf_from_mahalanobis(kind, component, component.mahalanobis_sq(point))(0);
}

double component_log_pdf(const ComponentKind& kind, const Vector& mean, const Matrix& cov,
                         const Eigen::Ref<const Vector>& x) {
  return component_log_pdf(kind, MixtureComponent(1.0, mean, cov), x);
}

MixtureModel::MixtureModel(ComponentKind kind, std::vector<MixtureComponent> components)
    : kind_(kind), dim_(0), components_(std::move(components)) {
  if (components_.empty()) {
    throw InvalidArgument("MixtureModel: at least one component is required");
  }
  dim_ = components_.front().dim();
  double total = 0.0;
  for (const auto& c : components_) {
    require_dim(dim_, c.dim(), "MixtureModel component");
    total += c.weight();
  }
  if (!(total > 0.0) || std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("MixtureModel: weights must sum to 1");
  }
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& c : components_) {
      c.set_weight(c.weight() / total);
    }
  }
}

MixtureModel MixtureModel::single(ComponentKind kind, Vector mean, Matrix cov) {
  return {kind, {MixtureComponent(1.0, std::move(mean), std::move(cov))}};
}

Vector MixtureModel::weights() const {
  Vector w(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t m = 0; m < components_.size(); ++m) {
    w(static_cast<Eigen::Index>(m)) = components_[m].weight();
  }
  return w;
}

Matrix MixtureModel::log_joint(const PointSet& points) const {
  require_dim(dim_, points.rows(), "MixtureModel::log_joint");
  Matrix terms(static_cast<Eigen::Index>(components_.size()), points.cols());
  for (std::size_t m = 0; m < components_.size(); ++m) {
    const auto& c = components_[m];
    const auto row = static_cast<Eigen::Index>(m);
    if (c.weight() <= 0.0) {
      terms.row(row).setConstant(kNegInf);
      continue;
    }
    terms.row(row) =
        (component_log_pdf_from_mahalanobis(kind_, c, c.mahalanobis_sq(points)).array() + std::log(c.weight()))
            .transpose();
  }
  return terms;
}

Vector log_sum_exp_columns(const Matrix& terms) {
  const Eigen::Index n = terms.cols();
  Vector result(n);
  if (terms.rows() == 1) {
    result = terms.row(0).transpose();
    return result;
  }
  const Eigen::RowVectorXd max = terms.colwise().maxCoeff();
  Matrix shifted = terms.rowwise() - max;
  // Columns whose max is -inf give NaN after the shift; they are patched below.
  kernels::exp_inplace(static_cast<std::size_t>(shifted.size()), shifted.data());
  const Eigen::RowVectorXd sums = shifted.colwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    result(i) = std::isfinite(max(i)) ? max(i) + std::log(sums(i)) : max(i);
  }
  return result;
}

Vector MixtureModel::log_density(const PointSet& points) const { return log_sum_exp_columns(log_joint(points)); }

double MixtureModel::log_density_at(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim_, x.size(), "MixtureModel::log_density_at");
  const PointSet point = x;
  return log_density(point)(0);
}

double MixtureModel::density(const Eigen::Ref<const Vector>& x) const { return std::exp(log_density_at(x)); }

PointSet MixtureModel::sample(Eigen::Index n, Rng& rng) const {
  if (n < 0) {
    throw InvalidArgument("MixtureModel::sample: negative count");
  }
  PointSet out(dim_, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(kind_.is_student_t() ? kind_.dof : 1.0);
  Vector z(dim_);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = unit(rng);
    std::size_t m = 0;
    double cumulative = components_[0].weight();
    while (u >= cumulative && m + 1 < components_.size()) {
      ++m;
      cumulative += components_[m].weight();
    }
    // Never land on a zero-weight component because of rounding in the cumulative sum.
    while (components_[m].weight() <= 0.0 && m > 0) {
      --m;
    }
    const auto& c = components_[m];
    for (Eigen::Index j = 0; j < dim_; ++j) {
      z(j) = normal(rng);
    }
    Vector step = c.chol().triangularView<Eigen::Lower>() * z;
    if (kind_.is_student_t()) {
      step *= std::sqrt(kind_.dof / chi2(rng));
    }
    out.col(i) = c.mean() + step;
  }
  return out;
}

}  // namespace aais
