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

#ifndef AAIS_TARGET_HPP
#define AAIS_TARGET_HPP

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <aais/common.hpp>
#include <aais/field.hpp>
#include <aais/mixture.hpp>
#include <aais/pde.hpp>

/**
 * \file
 * \brief Unnormalized target densities Q over a box.
 *
 * Targets are evaluated in log space. A target is zero outside its box: `log_evaluate` returns
 * -inf for every point that is not strictly inside the domain, whatever the concrete form.
 */

namespace aais {

class TargetDensity {
 public:
  explicit TargetDensity(BoxDomain domain) : domain_(std::move(domain)) {}
  virtual ~TargetDensity() = default;

  [[nodiscard]] const BoxDomain& domain() const { return domain_; }
  [[nodiscard]] Eigen::Index dim() const { return domain_.dim(); }

  /// log Q at each column; -inf where Q is zero or the point is outside the domain.
  [[nodiscard]] Vector log_evaluate(const PointSet& points) const;
  [[nodiscard]] Vector evaluate(const PointSet& points) const;
  [[nodiscard]] double operator()(const Eigen::Ref<const Vector>& x) const;

 protected:
  /// log Q for points known to be inside the domain.
  [[nodiscard]] virtual Vector log_evaluate_inside(const PointSet& points) const = 0;

 private:
  BoxDomain domain_;
};

/// Q(x) = sum_i exp(-K |x - c_i|^2).
class GaussianPeaksTarget final : public TargetDensity {
 public:
  GaussianPeaksTarget(BoxDomain domain, std::vector<Vector> centers, double sharpness);

  [[nodiscard]] const std::vector<Vector>& centers() const { return centers_; }
  [[nodiscard]] double sharpness() const { return sharpness_; }

 protected:
  [[nodiscard]] Vector log_evaluate_inside(const PointSet& points) const override;

 private:
  std::vector<Vector> centers_;
  double sharpness_;
};

/// Q given by an arbitrary non-negative function.
class FunctionTarget final : public TargetDensity {
 public:
  FunctionTarget(BoxDomain domain, std::function<double(const Vector&)> density);

 protected:
  [[nodiscard]] Vector log_evaluate_inside(const PointSet& points) const override;

 private:
  std::function<double(const Vector&)> density_;
};

/// A normalized mixture used as a target.
class MixtureTarget final : public TargetDensity {
 public:
  MixtureTarget(BoxDomain domain, MixtureModel model, double scale = 1.0);

 protected:
  [[nodiscard]] Vector log_evaluate_inside(const PointSet& points) const override;

 private:
  MixtureModel model_;
  double log_scale_;
};

/// Lower clamp applied to log q in the annealed product: the double-precision underflow edge.
inline constexpr double kLogProposalFloor = -745.0;

/// Q_lambda(x) = max(q(x), floor)^(1 - lambda) * Q(x)^lambda with q a frozen proposal.
/// Holds a reference to `base`, which must outlive it.
class AnnealedTarget final : public TargetDensity {
 public:
  AnnealedTarget(MixtureModel proposal, const TargetDensity& base, double lambda);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] const MixtureModel& proposal() const { return proposal_; }
  [[nodiscard]] const TargetDensity& base() const { return base_; }

  /// Combines already computed log q and log Q values.
  [[nodiscard]] Vector combine(const Vector& log_proposal, const Vector& log_base) const;

 protected:
  [[nodiscard]] Vector log_evaluate_inside(const PointSet& points) const override;

 private:
  MixtureModel proposal_;
  const TargetDensity& base_;
  double lambda_;
};

/// Q(x) = |N(x; u)|^2 for a field u and a problem N. Holds references to both.
class ResidualTarget final : public TargetDensity {
 public:
  ResidualTarget(const Field& field, const PdeProblem& problem);

 protected:
  [[nodiscard]] Vector log_evaluate_inside(const PointSet& points) const override;

 private:
  const Field& field_;
  const PdeProblem& problem_;
};

ResidualTarget residual_target(const Field& field, const PdeProblem& problem);

/// Names of the synthetic targets: one-peak-2d, two-peak-2d, nine-peak-2d.
std::vector<std::string> synthetic_target_names();

/// Peaks exp(-1000 |x - c|^2) on (-1, 1)^2.
std::unique_ptr<GaussianPeaksTarget> make_synthetic_target(std::string_view name);

}  // namespace aais

#endif
