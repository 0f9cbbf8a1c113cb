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

#include <aais/pde.hpp>

#include <cmath>

namespace aais {

double Field::value(const Eigen::Ref<const Vector>& x) const {
  const PointSet point = x;
  return values(point)(0);
}

Vector Field::gradient(const Eigen::Ref<const Vector>& x) const {
  const PointSet point = x;
  return jets(point).gradient.col(0);
}

double Field::laplacian(const Eigen::Ref<const Vector>& x) const {
  const PointSet point = x;
  return jets(point).laplacian(0);
}

Vector PdeProblem::interior_operator(const Field& field, const PointSet& points) const {
  return interior_residual(points, field.jets(points));
}

PoissonProblem::PoissonProblem(std::vector<Vector> centers, double sharpness, PeakForm form)
    : domain_(BoxDomain::symmetric_unit(centers.empty() ? 0 : centers.front().size())),
      centers_(std::move(centers)),
      sharpness_(sharpness),
      form_(form) {
  if (!(sharpness_ > 0.0)) {
    throw InvalidArgument("PoissonProblem: sharpness must be positive");
  }
  for (const auto& c : centers_) {
    require_dim(domain_.dim(), c.size(), "PoissonProblem center");
    if (!domain_.contains(c)) {
      throw InvalidArgument("PoissonProblem: centers must lie inside the domain");
    }
  }
}

double PoissonProblem::exact_solution(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim(), x.size(), "exact_solution");
  double u = 0.0;
  for (const auto& c : centers_) {
    if (form_ == PeakForm::kProduct) {
      u += std::exp(-sharpness_ * (x - c).squaredNorm());
    } else {
      u += (-sharpness_ * (x - c).array().square()).exp().sum();
    }
  }
  return u;
}

Vector PoissonProblem::exact_gradient(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim(), x.size(), "exact_gradient");
  Vector grad = Vector::Zero(dim());
  for (const auto& c : centers_) {
    const Vector offset = x - c;
    if (form_ == PeakForm::kProduct) {
      grad += std::exp(-sharpness_ * offset.squaredNorm()) * (-2.0 * sharpness_) * offset;
    } else {
      grad.array() += (-sharpness_ * offset.array().square()).exp() * (-2.0 * sharpness_) * offset.array();
    }
  }
  return grad;
}

double PoissonProblem::source_term(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim(), x.size(), "source_term");
  const double k = sharpness_;
  const auto d = static_cast<double>(dim());
  double f = 0.0;
  for (const auto& c : centers_) {
    const Vector offset = x - c;
    if (form_ == PeakForm::kProduct) {
      const double r2 = offset.squaredNorm();
      f += std::exp(-k * r2) * (2.0 * k * d - 4.0 * k * k * r2);
    } else {
      const auto t2 = offset.array().square();
      f += ((-k * t2).exp() * (2.0 * k - 4.0 * k * k * t2)).sum();
    }
  }
  return f;
}

double PoissonProblem::boundary_term(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim(), x.size(), "boundary_term");
  const bool on_boundary = ((x.array().abs() - 1.0).abs() <= 1e-12).any();
  if (!on_boundary) {
    throw InvalidArgument("boundary_term: point is not on the boundary");
  }
  return exact_solution(x);
}

Vector PoissonProblem::source_terms(const PointSet& points) const {
  Vector f(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    f(i) = source_term(points.col(i));
  }
  return f;
}

Vector PoissonProblem::interior_residual(const PointSet& points, const FieldJets& jets) const {
  require_dim(points.cols(), jets.laplacian.size(), "interior_residual");
  return -jets.laplacian - source_terms(points);
}

JetPartials PoissonProblem::interior_residual_partials(const PointSet& points, const FieldJets& /*jets*/) const {
  const Eigen::Index n = points.cols();
  return {Vector::Zero(n), Matrix::Zero(dim(), n), Vector::Constant(n, -1.0)};
}

Vector PoissonProblem::boundary_values(const PointSet& points) const { return exact_values(points); }

Vector PoissonProblem::exact_values(const PointSet& points) const {
  require_dim(dim(), points.rows(), "exact_values");
  Vector u(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    u(i) = exact_solution(points.col(i));
  }
  return u;
}

std::vector<Vector> nine_peak_centers() {
  std::vector<Vector> centers;
  for (int i = 0; i < 9; ++i) {
    Vector c(2);
    // Rows step downwards from y = 0.5 so that the grid {-0.5, 0, 0.5}^2 stays inside (-1, 1)^2.
    c << -0.5 + (i % 3) / 2.0, 0.5 - (i / 3) / 2.0;
    centers.push_back(c);
  }
  return centers;
}

std::vector<std::string> preset_names() {
  return {"poisson2d-1p", "poisson2d-9p", "poisson5d-2p", "poisson9d-2p", "poisson15d-1p"};
}

PoissonProblem make_preset(std::string_view name, PeakForm form) {
  const auto point = [](std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
      v(i++) = x;
    }
    return v;
  };
  if (name == "poisson2d-1p") {
    return {{point({0.5, 0.5})}, 1000.0, form};
  }
  if (name == "poisson2d-9p") {
    return {nine_peak_centers(), 1000.0, form};
  }
  if (name == "poisson5d-2p") {
    // (0.5 (-1)^i, 0.5 (-1)^i, 0, 0, 0) for i = 1, 2.
    return {{point({-0.5, -0.5, 0, 0, 0}), point({0.5, 0.5, 0, 0, 0})}, 100.0, form};
  }
  if (name == "poisson9d-2p") {
    Vector a = Vector::Zero(9);
    Vector b = Vector::Zero(9);
    a.head(2) << 0.5, 0.5;
    b.head(2) << -0.5, 0.5;
    return {{a, b}, 100.0, form};
  }
  if (name == "poisson15d-1p") {
    return {{Vector::Zero(15)}, 10.0, form};
  }
  throw InvalidArgument("unknown problem preset: " + std::string(name));
}

Vector ExactSolutionField::values(const PointSet& points) const { return problem_.exact_values(points); }

FieldJets ExactSolutionField::jets(const PointSet& points) const {
  FieldJets jets{problem_.exact_values(points), Matrix(dim(), points.cols()), Vector(points.cols())};
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    jets.gradient.col(i) = problem_.exact_gradient(points.col(i));
    jets.laplacian(i) = -problem_.source_term(points.col(i));
  }
  return jets;
}

Vector ScaledExactField::values(const PointSet& points) const { return scale_ * exact_.values(points); }

FieldJets ScaledExactField::jets(const PointSet& points) const {
  FieldJets jets = exact_.jets(points);
  jets.value *= scale_;
  jets.gradient *= scale_;
  jets.laplacian *= scale_;
  return jets;
}

PointSet sample_interior(const PdeProblem& problem, Eigen::Index n, Rng& rng) {
  return problem.domain().sample_uniform(n, rng);
}

PointSet sample_boundary(const PdeProblem& problem, Eigen::Index n, Rng& rng) {
  const BoxDomain& box = problem.domain();
  const Eigen::Index d = box.dim();
  PointSet points = box.sample_uniform(n, rng);
  std::uniform_int_distribution<Eigen::Index> face(0, 2 * d - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index f = face(rng);
    const Eigen::Index axis = f / 2;
    points(axis, i) = (f % 2 == 0) ? box.lower()(axis) : box.upper()(axis);
  }
  return points;
}

double default_test_sigma(const PoissonProblem& problem) { return 1.0 / std::sqrt(2.0 * problem.sharpness()); }

TestSet build_test_set(const PoissonProblem& problem, Eigen::Index n_uniform, Eigen::Index n_gauss_per_peak,
                       double sigma, Rng& rng) {
  if (n_uniform < 0 || n_gauss_per_peak < 0 || !(sigma > 0.0)) {
    throw InvalidArgument("build_test_set: invalid sizes or sigma");
  }
  const Eigen::Index d = problem.dim();
  const auto peaks = static_cast<Eigen::Index>(problem.centers().size());
  PointSet points(d, n_uniform + peaks * n_gauss_per_peak);
  points.leftCols(n_uniform) = problem.domain().sample_uniform(n_uniform, rng);

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Index column = n_uniform;
  Vector x(d);
  for (const auto& center : problem.centers()) {
    const Eigen::Index max_attempts = 1000 * std::max<Eigen::Index>(n_gauss_per_peak, 1);
    Eigen::Index accepted = 0;
    for (Eigen::Index attempt = 0; accepted < n_gauss_per_peak; ++attempt) {
      if (attempt >= max_attempts) {
        throw Error("build_test_set: Gaussian draws keep falling outside the domain");
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        x(j) = center(j) + sigma * normal(rng);
      }
      if (problem.domain().contains(x)) {
        points.col(column++) = x;
        ++accepted;
      }
    }
  }
  return {points, problem.exact_values(points)};
}

Metrics compute_metrics(const Vector& predicted, const Vector& exact) {
  require_dim(exact.size(), predicted.size(), "compute_metrics");
  const double reference = exact.norm();
  if (!(reference > 0.0)) {
    throw Error("compute_metrics: degenerate reference (all exact values are zero)");
  }
  const Vector diff = predicted - exact;
  return {diff.norm() / reference, diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff()};
}

Metrics compute_metrics(const Field& field, const TestSet& test) {
  return compute_metrics(field.values(test.points), test.exact);
}

}  // namespace aais
