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
#include <vector>

#include <gtest/gtest.h>

#include <aais/em.hpp>

#include "oracles/em_instances.hpp"
#include "oracles/oracles.hpp"

using namespace aais;

namespace {

using Instance = oracle::EmInstance;

Instance random_instance(Eigen::Index d, std::size_t m, ComponentKind kind, std::uint64_t seed) {
  return oracle::random_em_instance(d, m, kind, seed);
}

}  // namespace

TEST(Ess, EqualWeightsGiveOne) {
  const std::vector<double> w(17, 0.3);
  EXPECT_NEAR(ess(w), 1.0, 1e-15);
}

TEST(Ess, OneHotGivesOneOverN) {
  std::vector<double> w(40, 0.0);
  w[7] = 2.5;
  EXPECT_NEAR(ess(w), 1.0 / 40.0, 1e-15);
}

TEST(Ess, ScaleInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(100);
  for (auto& v : w) {
    v = u(rng);
  }
  const double base = ess(w);
  EXPECT_NEAR(base, oracle::ess(w), 1e-13);
  for (const double c : {1e-6, 1.0, 1e6}) {
    std::vector<double> scaled = w;
    for (auto& v : scaled) {
      v *= c;
    }
    EXPECT_NEAR(ess(scaled), base, 1e-12);
  }
}

TEST(Ess, LogFormSurvivesUnderflow) {
  Vector log_w(3);
  log_w << -2000.0, -2000.0, -1999.5;
  EXPECT_NEAR(ess_from_log(log_w), oracle::ess({1.0, 1.0, std::exp(0.5)}), 1e-14);
}

TEST(Ess, DegenerateAndInvalidBatches) {
  EXPECT_THROW(ess(std::vector<double>(5, 0.0)), DegenerateBatchError);
  EXPECT_THROW(ess(std::vector<double>{}), DegenerateBatchError);
  EXPECT_THROW(ess(std::vector<double>{1.0, -1.0}), InvalidArgument);
  EXPECT_THROW(ess_from_log(Vector::Constant(3, -std::numeric_limits<double>::infinity())), DegenerateBatchError);
}

TEST(Weights, NormalizedAndFlaggedWhenDegenerate) {
  const Vector log_q = Vector::Zero(3);
  Vector log_t(3);
  log_t << 0.0, std::log(3.0), -std::numeric_limits<double>::infinity();
  const WeightedBatch b = make_weighted_batch(PointSet::Zero(1, 3), log_t, log_q);
  EXPECT_FALSE(b.degenerate);
  EXPECT_NEAR(b.normalized(0), 0.25, 1e-15);
  EXPECT_NEAR(b.normalized(1), 0.75, 1e-15);
  EXPECT_EQ(b.normalized(2), 0.0);

  const WeightedBatch z = make_weighted_batch(PointSet::Zero(1, 2), Vector::Constant(2, log_t(2)), Vector::Zero(2));
  EXPECT_TRUE(z.degenerate);
  EXPECT_NEAR(z.normalized.sum(), 1.0, 1e-15);
}

TEST(Weights, TargetOverProposal) {
  const auto target = make_synthetic_target("one-peak-2d");
  const MixtureModel q =
      MixtureModel::single(ComponentKind::gaussian(), Vector::Constant(2, 0.5), Matrix::Identity(2, 2) * 0.01);
  Rng rng(3);
  const WeightedBatch b = sample_weighted(*target, q, 50, rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const Vector x = b.points.col(i);
    const double expected = (*target)(x) / q.density(x);
    EXPECT_NEAR(std::exp(b.log_raw(i)), expected, 1e-10 * std::max(1.0, expected));
  }
}

TEST(Em, GaussianMatchesNaiveReference) {
  std::uint64_t seed = 100;
  for (const Eigen::Index d : {1, 2, 3}) {
    for (const std::size_t m : {1u, 2u, 4u}) {
      const Instance inst = random_instance(d, m, ComponentKind::gaussian(), seed++);
      const MixtureModel got = em_step_gaussian(inst.model, inst.batch);
      const auto want = oracle::em_step(oracle::NaiveMixture::from(inst.model), inst.batch.points, inst.batch.normalized);
      EXPECT_LE(oracle::max_em_error(got, want), 1e-10) << "d " << d << " M " << m;
    }
  }
}

TEST(Em, StudentTMatchesNaiveReference) {
  std::uint64_t seed = 200;
  for (const Eigen::Index d : {1, 2, 3}) {
    for (const std::size_t m : {1u, 2u, 4u}) {
      const Instance inst = random_instance(d, m, ComponentKind::student_t(3.0), seed++);
      const MixtureModel got = em_step_student_t(inst.model, inst.batch);
      const auto want = oracle::em_step(oracle::NaiveMixture::from(inst.model), inst.batch.points, inst.batch.normalized);
      EXPECT_LE(oracle::max_em_error(got, want), 1e-10) << "d " << d << " M " << m;
    }
  }
}

TEST(Em, FamilyMismatchThrows) {
  const Instance g = random_instance(2, 2, ComponentKind::gaussian(), 1);
  EXPECT_THROW(em_step_student_t(g.model, g.batch), InvalidArgument);
  const Instance t = random_instance(2, 2, ComponentKind::student_t(3.0), 1);
  EXPECT_THROW(em_step_gaussian(t.model, t.batch), InvalidArgument);
}

TEST(Em, WeightsStayNormalized) {
  const Instance inst = random_instance(2, 4, ComponentKind::student_t(3.0), 9);
  const MixtureModel next = em_step(inst.model, inst.batch);
  EXPECT_NEAR(next.weights().sum(), 1.0, 1e-12);
}

TEST(Em, GaussianStepDoesNotDecreaseLikelihood) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = random_instance(2, 3, ComponentKind::gaussian(), 300 + seed);
    const double before = weighted_log_likelihood(inst.model, inst.batch);
    const double after = weighted_log_likelihood(em_step_gaussian(inst.model, inst.batch), inst.batch);
    EXPECT_GE(after, before - 1e-9) << "seed " << seed;
  }
}

TEST(Em, SingleGaussianStepIsWeightedMoments) {
  const Instance inst = random_instance(2, 1, ComponentKind::gaussian(), 77);
  const MixtureModel next = em_step_gaussian(inst.model, inst.batch);
  const Vector& w = inst.batch.normalized;
  const Vector mean = inst.batch.points * w;
  const Matrix centered = inst.batch.points.colwise() - mean;
  const Matrix cov = centered * w.asDiagonal() * centered.transpose();
  EXPECT_LT((next.component(0).mean() - mean).norm(), 1e-14);
  EXPECT_LT((next.component(0).cov() - cov).norm(), 1e-14);
}

TEST(Em, ResponsibilitiesSumToOne) {
  const Instance inst = random_instance(3, 4, ComponentKind::student_t(5.0), 8);
  const Matrix r = responsibilities(inst.model, inst.batch.points);
  EXPECT_LT((r.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(Em, StudentTDelta) {
  const Vector mean = Vector::Zero(2);
  const Matrix cov = Matrix::Identity(2, 2) * 0.5;
  Vector x(2);
  x << 1.0, 0.0;
  EXPECT_NEAR(student_t_delta(x, mean, cov, 3.0), 5.0 / (3.0 + 2.0), 1e-15);
}
