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

#ifndef AAIS_SAMPLERS_HPP
#define AAIS_SAMPLERS_HPP

#include <optional>
#include <variant>
#include <vector>

#include <aais/aais.hpp>
#include <aais/common.hpp>
#include <aais/target.hpp>

namespace aais {

struct UniformSampler {};

/// Residual-based adaptive distribution: categorical selection among N_S uniform candidates.
struct RadSampler {
  Eigen::Index n_search = 10000;
};

struct AaisSampler {
  AaisConfig config;
};

using SamplerSpec = std::variant<UniformSampler, RadSampler, AaisSampler>;

const char* sampler_name(const SamplerSpec& spec);

/// What a proposal step produced besides the points.
struct Proposal {
  PointSet points;
  bool fallback = false;                ///< RAD saw an all-zero target and fell back to uniform
  std::optional<MixtureModel> mixture;  ///< AAIS only
  std::optional<AaisTrace> trace;       ///< AAIS only
};

/// N_D collocation points strictly inside the target's domain.
Proposal propose_points(const SamplerSpec& spec, const TargetDensity& target, Eigen::Index n_points, Rng& rng);

/// p_i = Q(x_i) / sum_j Q(x_j). Returns nullopt when every value is zero.
std::optional<Vector> rad_probabilities(const Vector& values);

/// `count` distinct indices drawn sequentially without replacement, each draw proportional to
/// `probabilities` among the indices not taken yet. Zero-probability indices are only used
/// once every positive one is taken, in uniformly random order.
std::vector<Eigen::Index> rad_select(const Vector& probabilities, Eigen::Index count, Rng& rng);

/// Draws from `mixture` rejecting points outside `domain` until `count` are accepted.
/// Throws Error("proposal mass outside domain") after 100 * count attempts.
PointSet sample_inside(const MixtureModel& mixture, const BoxDomain& domain, Eigen::Index count, Rng& rng);

}  // namespace aais

#endif
