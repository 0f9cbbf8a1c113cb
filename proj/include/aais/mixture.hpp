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

#ifndef AAIS_MIXTURE_HPP
#define AAIS_MIXTURE_HPP

#include <vector>

#include <Eigen/Cholesky>

#include <aais/common.hpp>

/**
 * \file
 * \brief Finite mixtures of multivariate Gaussian or Student-t components.
 */

namespace aais {

/// Component family shared by all components of a mixture.
struct ComponentKind {
  enum class Family { kGaussian, kStudentT };

  Family family = Family::kGaussian;
  double dof = 0.0;  ///< Degrees of freedom, Student-t only.

  static ComponentKind gaussian() { return {}; }
  /// Requires dof > 2 so the covariance exists.
  static ComponentKind student_t(double dof);

  [[nodiscard]] bool is_student_t() const { return family == Family::kStudentT; }
  friend bool operator==(const ComponentKind&, const ComponentKind&) = default;
};

/// One weighted component. For Student-t the matrix is the scale matrix, not the covariance.
class MixtureComponent {
 public:
  /// Factorizes `cov`, adding jitter eps * tr(cov)/d * I (eps = 1e-8, growing 10x per retry,
  /// three retries) when the plain Cholesky factorization fails.
  /// Throws FactorizationError if the matrix is still not positive definite.
  MixtureComponent(double weight, Vector mean, Matrix cov);

  [[nodiscard]] double weight() const { return weight_; }
  void set_weight(double w) { weight_ = w; }
  [[nodiscard]] const Vector& mean() const { return mean_; }
  [[nodiscard]] const Matrix& cov() const { return cov_; }
  [[nodiscard]] Eigen::Index dim() const { return mean_.size(); }
  /// Lower Cholesky factor L with L L^T = cov.
  [[nodiscard]] const Matrix& chol() const { return chol_; }
  [[nodiscard]] double log_det() const { return log_det_; }
  /// True if the factorization needed jitter.
  [[nodiscard]] bool regularized() const { return regularized_; }

  /// Squared Mahalanobis distance of each column of `points` from the mean.
  [[nodiscard]] Vector mahalanobis_sq(const PointSet& points) const;

 private:
  double weight_;
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_det_ = 0.0;
  bool regularized_ = false;
};

/// Log-density of a single component (weight ignored).
double component_log_pdf(const ComponentKind& kind, const MixtureComponent& component,
                         const Eigen::Ref<const Vector>& x);

/// Log-density from precomputed squared Mahalanobis distances.
Vector component_log_pdf_from_mahalanobis(const ComponentKind& kind, const MixtureComponent& component,
                                          const Vector& mahalanobis_sq);

/// Convenience overload building the component on the fly.
double component_log_pdf(const ComponentKind& kind, const Vector& mean, const Matrix& cov,
                         const Eigen::Ref<const Vector>& x);

/// q(x) = sum_m alpha_m f_m(x).
class MixtureModel {
 public:
  /// Weights must sum to 1 within 1e-6; they are rescaled only if off by more than 1e-12.
  MixtureModel(ComponentKind kind, std::vector<MixtureComponent> components);

  /// Single component with weight 1.
  static MixtureModel single(ComponentKind kind, Vector mean, Matrix cov);

  [[nodiscard]] const ComponentKind& kind() const { return kind_; }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return components_.size(); }
  [[nodiscard]] const std::vector<MixtureComponent>& components() const { return components_; }
  [[nodiscard]] const MixtureComponent& component(std::size_t m) const { return components_.at(m); }
  [[nodiscard]] Vector weights() const;

  [[nodiscard]] double density(const Eigen::Ref<const Vector>& x) const;
  [[nodiscard]] double log_density_at(const Eigen::Ref<const Vector>& x) const;
  [[nodiscard]] Vector log_density(const PointSet& points) const;

  /// log(alpha_m) + log f_m(x_i) as an M x N matrix. Zero-weight components give -inf rows.
  [[nodiscard]] Matrix log_joint(const PointSet& points) const;

  /// n draws; deterministic given the engine state.
  [[nodiscard]] PointSet sample(Eigen::Index n, Rng& rng) const;

 private:
  ComponentKind kind_;
  Eigen::Index dim_;
  std::vector<MixtureComponent> components_;
};

/// Column-wise log(sum(exp(.))) of a matrix, stable under -inf entries.
Vector log_sum_exp_columns(const Matrix& terms);

}  // namespace aais

#endif
