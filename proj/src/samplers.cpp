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

#include <aais/samplers.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aais {

const char* sampler_name(const SamplerSpec& spec) {
  switch (spec.index()) {
    case 0:
      return "uniform";
    case 1:
      return "rad";
    default:
      return "aais";
  }
}

std::optional<Vector> rad_probabilities(const Vector& values) {
  if ((values.array() < 0.0).any() || !values.allFinite()) {
    throw InvalidArgument("rad_probabilities: values must be finite and non-negative");
  }
  const double top = values.size() > 0 ? values.maxCoeff() : 0.0;
  if (!(top > 0.0)) {
    return std::nullopt;
  }
  // Scaling by the maximum first keeps the sum finite and makes a constant input exactly 1/N.
  const Vector scaled = values / top;
  return Vector(scaled / scaled.sum());
}

std::vector<Eigen::Index> rad_select(const Vector& probabilities, Eigen::Index count, Rng& rng) {
  const Eigen::Index n = probabilities.size();
  if (count < 0 || count > n) {
    throw InvalidArgument("rad_select: count must lie in [0, N_S]");
  }
  // Efraimidis-Spirakis: the `count` largest keys log(u_i) / p_i form a sequential
  // proportional draw without replacement.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, Eigen::Index>> keyed;
  std::vector<Eigen::Index> zeros;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (probabilities(i) > 0.0) {
      double u = unit(rng);
      while (u == 0.0) {
        u = unit(rng);
      }
      keyed.emplace_back(std::log(u) / probabilities(i), i);
    } else {
      zeros.push_back(i);
    }
  }
  const auto take = std::min<std::size_t>(keyed.size(), static_cast<std::size_t>(count));
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Eigen::Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count));
  for (std::size_t k = 0; k < take; ++k) {
    chosen.push_back(keyed[k].second);
  }
  if (static_cast<Eigen::Index>(chosen.size()) < count) {
    std::shuffle(zeros.begin(), zeros.end(), rng);
    for (std::size_t k = 0; static_cast<Eigen::Index>(chosen.size()) < count; ++k) {
      chosen.push_back(zeros[k]);
    }
  }
  return chosen;
}

PointSet sample_inside(const MixtureModel& mixture, const BoxDomain& domain, Eigen::Index count, Rng& rng) {
  require_dim(domain.dim(), mixture.dim(), "sample_inside");
  PointSet out(domain.dim(), count);
  const Eigen::Index max_attempts = 100 * count;
  Eigen::Index accepted = 0;
  Eigen::Index attempts = 0;
  while (accepted < count) {
    const Eigen::Index batch = std::min(count - accepted, max_attempts - attempts);
    if (batch <= 0) {
      throw Error("proposal mass outside domain");
    }
    const PointSet draws = mixture.sample(batch, rng);
    attempts += batch;
    for (Eigen::Index i = 0; i < batch && accepted < count; ++i) {
      if (domain.contains(draws.col(i))) {
        out.col(accepted++) = draws.col(i);
      }
    }
  }
  return out;
}

namespace {

struct ProposeVisitor {
  const TargetDensity& target;
  Eigen::Index n_points;
  Rng& rng;

  Proposal operator()(const UniformSampler&) const {
    return {target.domain().sample_uniform(n_points, rng), false, std::nullopt, std::nullopt};
  }

  Proposal operator()(const RadSampler& rad) const {
    if (rad.n_search < n_points) {
      throw InvalidArgument("RAD needs N_S >= N_D");
    }
    const PointSet candidates = target.domain().sample_uniform(rad.n_search, rng);
    const auto probabilities = rad_probabilities(target.evaluate(candidates));
    Proposal proposal{PointSet(target.dim(), n_points), !probabilities.has_value(), std::nullopt, std::nullopt};
    const Vector p = probabilities.value_or(Vector::Constant(rad.n_search, 1.0 / static_cast<double>(rad.n_search)));
    const auto chosen = rad_select(p, n_points, rng);
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      proposal.points.col(static_cast<Eigen::Index>(k)) = candidates.col(chosen[k]);
    }
    return proposal;
  }

  Proposal operator()(const AaisSampler& sampler) const {
    AaisResult fit = run_aais(target, sampler.config, rng);
    PointSet points = sample_inside(fit.proposal, target.domain(), n_points, rng);
    return {std::move(points), false, std::move(fit.proposal), std::move(fit.trace)};
  }
};

}  // namespace

Proposal propose_points(const SamplerSpec& spec, const TargetDensity& target, Eigen::Index n_points, Rng& rng) {
  if (n_points < 1) {
    throw InvalidArgument("propose_points: N_D must be positive");
  }
  return std::visit(ProposeVisitor{target, n_points, rng}, spec);
}

}  // namespace aais
