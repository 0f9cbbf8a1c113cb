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

#ifndef AAIS_PDE_HPP
#define AAIS_PDE_HPP

#include <string>
#include <string_view>
#include <vector>

#include <aais/common.hpp>
#include <aais/field.hpp>

/**
 * \file
 * \brief Boundary value problems, the multi-peak Poisson family, test sets and error metrics.
 */

namespace aais {

/// Partial derivatives of an interior residual with respect to each jet entry, per point.
struct JetPartials {
  Vector value;
  Matrix gradient;
  Vector laplacian;
};

/// A PDE `N(x; u) = 0` in a box with Dirichlet data `u = g` on the boundary.
class PdeProblem {
 public:
  virtual ~PdeProblem() = default;

  [[nodiscard]] virtual Eigen::Index dim() const = 0;
  [[nodiscard]] virtual const BoxDomain& domain() const = 0;

  /// N(x_i; u) for every column of `points`, given the field jets at those points.
  [[nodiscard]] virtual Vector interior_residual(const PointSet& points, const FieldJets& jets) const = 0;

  /// dN/d(jet) at every point.
  [[nodiscard]] virtual JetPartials interior_residual_partials(const PointSet& points,
                                                               const FieldJets& jets) const = 0;

  /// Dirichlet data g(x) at boundary points.
  [[nodiscard]] virtual Vector boundary_values(const PointSet& points) const = 0;

  /// Reference solution used for error metrics.
  [[nodiscard]] virtual Vector exact_values(const PointSet& points) const = 0;

  /// Residual over a field: convenience wrapper around `interior_residual`.
  [[nodiscard]] Vector interior_operator(const Field& field, const PointSet& points) const;
};

/// Interpretation of the high-dimensional exact solution.
enum class PeakForm {
  kProduct,     ///< sum_i exp(-K |x - c_i|^2)
  kLiteralSum,  ///< sum_i sum_j exp(-K (x_j - c_ij)^2)
};

/// -Laplace(u) = f in (-1, 1)^d, u = g on the boundary, with f and g taken from a sum of
/// Gaussian peaks of sharpness K.
class PoissonProblem final : public PdeProblem {
 public:
  PoissonProblem(std::vector<Vector> centers, double sharpness, PeakForm form = PeakForm::kProduct);

  [[nodiscard]] Eigen::Index dim() const override { return domain_.dim(); }
  [[nodiscard]] const BoxDomain& domain() const override { return domain_; }
  [[nodiscard]] const std::vector<Vector>& centers() const { return centers_; }
  [[nodiscard]] double sharpness() const { return sharpness_; }
  [[nodiscard]] PeakForm form() const { return form_; }

  [[nodiscard]] double exact_solution(const Eigen::Ref<const Vector>& x) const;
  [[nodiscard]] Vector exact_gradient(const Eigen::Ref<const Vector>& x) const;
  /// f = -Laplace(u*).
  [[nodiscard]] double source_term(const Eigen::Ref<const Vector>& x) const;
  /// g = u* on the boundary; throws InvalidArgument if no coordinate is at +-1 within 1e-12.
  [[nodiscard]] double boundary_term(const Eigen::Ref<const Vector>& x) const;

  /// N(x; u) = -Laplace(u) - f.
  [[nodiscard]] Vector interior_residual(const PointSet& points, const FieldJets& jets) const override;
  [[nodiscard]] JetPartials interior_residual_partials(const PointSet& points, const FieldJets& jets) const override;
  [[nodiscard]] Vector boundary_values(const PointSet& points) const override;
  [[nodiscard]] Vector exact_values(const PointSet& points) const override;

  [[nodiscard]] Vector source_terms(const PointSet& points) const;

 private:
  BoxDomain domain_;
  std::vector<Vector> centers_;
  double sharpness_;
  PeakForm form_;
};

/// Names accepted by `make_preset`.
std::vector<std::string> preset_names();

/// poisson2d-1p, poisson2d-9p, poisson5d-2p, poisson9d-2p, poisson15d-1p.
PoissonProblem make_preset(std::string_view name, PeakForm form = PeakForm::kProduct);

/// The nine centers (-0.5 + mod(i,3)/2, 0.5 - floor(i/3)/2), i = 0..8: the grid {-0.5, 0, 0.5}^2.
std::vector<Vector> nine_peak_centers();

/// The exact solution seen as a Field.
class ExactSolutionField final : public Field {
 public:
  explicit ExactSolutionField(const PoissonProblem& problem) : problem_(problem) {}

  [[nodiscard]] Eigen::Index dim() const override { return problem_.dim(); }
  [[nodiscard]] Vector values(const PointSet& points) const override;
  [[nodiscard]] FieldJets jets(const PointSet& points) const override;

 private:
  const PoissonProblem& problem_;
};

/// u(x) = scale * u*(x); handy for metric checks.
class ScaledExactField final : public Field {
 public:
  ScaledExactField(const PoissonProblem& problem, double scale) : exact_(problem), scale_(scale) {}

  [[nodiscard]] Eigen::Index dim() const override { return exact_.dim(); }
  [[nodiscard]] Vector values(const PointSet& points) const override;
  [[nodiscard]] FieldJets jets(const PointSet& points) const override;

 private:
  ExactSolutionField exact_;
  double scale_;
};

/// Uniform points in the open box.
PointSet sample_interior(const PdeProblem& problem, Eigen::Index n, Rng& rng);

/// Uniform on the boundary: a face among the 2d faces uniformly, then uniform on that face.
PointSet sample_boundary(const PdeProblem& problem, Eigen::Index n, Rng& rng);

struct TestSet {
  PointSet points;
  Vector exact;
};

/// Uniform interior points plus, for every peak center, Gaussian draws N(c, sigma^2 I)
/// rejected outside the domain.
TestSet build_test_set(const PoissonProblem& problem, Eigen::Index n_uniform, Eigen::Index n_gauss_per_peak,
                       double sigma, Rng& rng);

/// sigma = 1 / sqrt(2K), the width of one peak.
double default_test_sigma(const PoissonProblem& problem);

struct Metrics {
  double relative_l2 = 0.0;
  double max_abs = 0.0;
};

Metrics compute_metrics(const Field& field, const TestSet& test);
Metrics compute_metrics(const Vector& predicted, const Vector& exact);

}  // namespace aais

#endif
