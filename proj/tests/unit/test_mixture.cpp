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

#include <cmath>

#include <gtest/gtest.h>

#include <aais/mixture.hpp>

#include "oracles/oracles.hpp"

using namespace aais;

namespace {

MixtureModel two_component(ComponentKind kind) {
  Matrix c1(2, 2);
  c1 << 0.3, 0.1, 0.1, 0.2;
  Matrix c2(2, 2);
  c2 << 0.05, -0.02, -0.02, 0.4;
  return {kind, {MixtureComponent(0.3, Vector::Constant(2, -0.4), c1), MixtureComponent(0.7, Vector::Constant(2, 0.5), c2)}};
}

}  // namespace

TEST(Mixture, StudentTNeedsMoreThanTwoDegreesOfFreedom) {
  EXPECT_THROW(ComponentKind::student_t(2.0), InvalidArgument);
  EXPECT_NO_THROW(ComponentKind::student_t(2.5));
}

TEST(Mixture, LogPdfMatchesTextbookDensities) {
  std::mt19937_64 rng(5);
  for (const Eigen::Index d : {1, 2, 3}) {
    const Matrix cov = oracle::random_spd(d, 0.4, rng);
    const Vector mean = Vector::LinSpaced(d, -0.3, 0.2);
    const MixtureComponent c(1.0, mean, cov);
    for (int k = 0; k < 5; ++k) {
      const Vector x = mean + Vector::Random(d);
      EXPECT_NEAR(std::exp(component_log_pdf(ComponentKind::gaussian(), c, x)), oracle::gaussian_pdf(x, mean, cov),
                  1e-12 * oracle::gaussian_pdf(x, mean, cov));
      const double t = oracle::student_t_pdf(x, mean, cov, 3.0);
      EXPECT_NEAR(std::exp(component_log_pdf(ComponentKind::student_t(3.0), c, x)), t, 1e-12 * t);
    }
  }
}

TEST(Mixture, DensityIsWeightedSum) {
  for (const auto kind : {ComponentKind::gaussian(), ComponentKind::student_t(4.0)}) {
    const MixtureModel model = two_component(kind);
    const auto naive = oracle::NaiveMixture::from(model);
    for (int k = 0; k < 10; ++k) {
      const Vector x = Vector::Random(2);
      EXPECT_NEAR(model.density(x), naive.pdf(x), 1e-12 * naive.pdf(x));
    }
  }
}

TEST(Mixture, LogDensityStaysFiniteFarInTheTail) {
  const MixtureModel model = two_component(ComponentKind::gaussian());
  const Vector far = Vector::Constant(2, 60.0);
  const double value = model.log_density_at(far);
  EXPECT_TRUE(std::isfinite(value));
  EXPECT_LT(value, -1000.0);
}

TEST(Mixture, WeightsMustSumToOne) {
  EXPECT_THROW(MixtureModel(ComponentKind::gaussian(), {MixtureComponent(0.5, Vector::Zero(1), Matrix::Identity(1, 1))}),
               InvalidArgument);
  EXPECT_THROW(MixtureModel(ComponentKind::gaussian(), {}), InvalidArgument);
}

TEST(Mixture, MismatchedDimensionsAreRejected) {
  EXPECT_THROW(MixtureModel(ComponentKind::gaussian(), {MixtureComponent(0.5, Vector::Zero(1), Matrix::Identity(1, 1)),
                                                        MixtureComponent(0.5, Vector::Zero(2), Matrix::Identity(2, 2))}),
               DimensionError);
  EXPECT_THROW(MixtureComponent(1.0, Vector::Zero(2), Matrix::Identity(3, 3)), DimensionError);
}

TEST(Mixture, SingularCovarianceGetsJitter) {
  Matrix cov(2, 2);
  cov << 1.0, 1.0, 1.0, 1.0;
  const MixtureComponent c(1.0, Vector::Zero(2), cov);
  EXPECT_TRUE(c.regularized());
  EXPECT_TRUE(std::isfinite(c.log_det()));
  // All-zero covariance has zero trace: jitter falls back to unit scale.
  const MixtureComponent z(1.0, Vector::Zero(2), Matrix::Zero(2, 2));
  EXPECT_TRUE(z.regularized());
}

TEST(Mixture, IndefiniteCovarianceFails) {
  Matrix cov(2, 2);
  cov << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(MixtureComponent(1.0, Vector::Zero(2), cov), FactorizationError);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(MixtureComponent(1.0, Vector::Zero(2), nan), FactorizationError);
}

TEST(Mixture, SamplingIsDeterministicPerSeed) {
  const MixtureModel model = two_component(ComponentKind::student_t(3.0));
  Rng a(11);
  Rng b(11);
  EXPECT_EQ(model.sample(50, a), model.sample(50, b));
}

TEST(Mixture, SampleMomentsMatch) {
  Matrix scale(2, 2);
  scale << 0.5, 0.2, 0.2, 0.3;
  const Vector mean = Vector::Constant(2, 0.25);
  const Eigen::Index n = 200000;
  for (const auto kind : {ComponentKind::gaussian(), ComponentKind::student_t(6.0)}) {
    Rng rng(3);
    const PointSet x = MixtureModel::single(kind, mean, scale).sample(n, rng);
    const Vector m = x.rowwise().mean();
    const Matrix centered = x.colwise() - m;
    const Matrix cov = centered * centered.transpose() / static_cast<double>(n - 1);
    // A t_v scale matrix S has covariance v / (v - 2) S.
    const double factor = kind.is_student_t() ? kind.dof / (kind.dof - 2.0) : 1.0;
    EXPECT_LT((m - mean).norm(), 0.01);
    EXPECT_LT((cov - factor * scale).norm(), 0.03);
  }
}

TEST(Mixture, ComponentFrequenciesFollowWeights) {
  const MixtureModel model(ComponentKind::gaussian(), {MixtureComponent(0.3, Vector::Constant(1, -5.0), Matrix::Identity(1, 1)),
                                                       MixtureComponent(0.7, Vector::Constant(1, 5.0), Matrix::Identity(1, 1))});
  Rng rng(9);
  const PointSet x = model.sample(40000, rng);
  const auto positive = (x.array() > 0.0).count();
  EXPECT_NEAR(static_cast<double>(positive) / 40000.0, 0.7, 0.01);
}

TEST(Mixture, ZeroWeightComponentIsNeverSampled) {
  const MixtureModel model(ComponentKind::gaussian(),
                           {MixtureComponent(1.0, Vector::Zero(1), Matrix::Identity(1, 1) * 1e-4),
                            MixtureComponent(0.0, Vector::Constant(1, 50.0), Matrix::Identity(1, 1))});
  Rng rng(1);
  const PointSet x = model.sample(5000, rng);
  EXPECT_LT(x.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_TRUE(std::isinf(model.log_joint(Vector::Zero(1))(1, 0)));
}

TEST(Mixture, LogSumExpHandlesAllMinusInfinity) {
  Matrix t(2, 2);
  const double inf = std::numeric_limits<double>::infinity();
  t << -inf, 0.0, -inf, std::log(3.0);
  const Vector r = log_sum_exp_columns(t);
  EXPECT_EQ(r(0), -inf);
  EXPECT_NEAR(r(1), std::log(4.0), 1e-15);
}
