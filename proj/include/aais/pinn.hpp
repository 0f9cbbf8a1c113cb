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

#ifndef AAIS_PINN_HPP
#define AAIS_PINN_HPP

#include <vector>

#include <aais/common.hpp>
#include <aais/field.hpp>
#include <aais/pde.hpp>

/**
 * \file
 * \brief Fully connected tanh network with exact input derivatives and loss gradients.
 *
 * Input derivatives use second-order Taylor mode: for each input direction e_j the network
 * carries (u, du/dx_j, d2u/dx_j2) through every affine and tanh layer, all points and all
 * directions at once as one block matrix per layer. The Laplacian is the sum of the second
 * directional derivatives. Parameter gradients run a reverse pass over that same block
 * computation.
 */

namespace aais {

/// Weights and biases of a network with sizes [d, h_1, ..., h_L, 1].
struct MlpParams {
  std::vector<Eigen::Index> layer_sizes;
  std::vector<Matrix> weights;  ///< weights[l] is sizes[l+1] x sizes[l]
  std::vector<Vector> biases;   ///< biases[l] has sizes[l+1] entries

  /// Zero network with the given sizes. Throws InvalidArgument unless there are at least two
  /// sizes, all positive, ending in 1.
  static MlpParams zeros(const std::vector<Eigen::Index>& sizes);

  [[nodiscard]] Eigen::Index input_dim() const { return layer_sizes.front(); }
  [[nodiscard]] std::size_t layer_count() const { return weights.size(); }
  [[nodiscard]] Eigen::Index parameter_count() const;

  /// Layer by layer: W (column-major) then b.
  [[nodiscard]] Vector flatten() const;
  void assign(const Vector& theta);
  static MlpParams unflatten(const std::vector<Eigen::Index>& sizes, const Vector& theta);
};

/// Glorot-uniform weights, zero biases.
MlpParams init_params(const std::vector<Eigen::Index>& sizes, Rng& rng);

/// [d, width x depth, 1].
std::vector<Eigen::Index> mlp_sizes(Eigen::Index input_dim, Eigen::Index width, Eigen::Index depth);

/// Single point; `forward` takes a point set.
double forward_at(const MlpParams& params, const Eigen::Ref<const Vector>& x);
Vector forward(const MlpParams& params, const PointSet& points);

struct InputDerivatives {
  double value = 0.0;
  Vector gradient;
  double laplacian = 0.0;
};

InputDerivatives input_derivatives(const MlpParams& params, const Eigen::Ref<const Vector>& x);
FieldJets input_jets(const MlpParams& params, const PointSet& points);

/// A network viewed as a Field. Copies the parameters.
class MlpField final : public Field {
 public:
  explicit MlpField(MlpParams params) : params_(std::move(params)) {}

  [[nodiscard]] Eigen::Index dim() const override { return params_.input_dim(); }
  [[nodiscard]] Vector values(const PointSet& points) const override { return forward(params_, points); }
  [[nodiscard]] FieldJets jets(const PointSet& points) const override { return input_jets(params_, points); }
  [[nodiscard]] const MlpParams& params() const { return params_; }

 private:
  MlpParams params_;
};

/// Collocation sets and weights of the discretized loss.
/// Holds a reference to the problem, which must outlive it.
struct LossSpec {
  const PdeProblem& problem;
  PointSet interior;
  Vector interior_weights;  ///< empty means all ones
  PointSet boundary;        ///< may have zero columns
  Vector boundary_weights;  ///< empty means all ones
};

/// (1/N_in) sum w_i |N(x_i; u)|^2 + (1/N_b) sum w_b |u(x_b) - g(x_b)|^2.
double loss(const MlpParams& params, const LossSpec& spec);

struct LossTerms {
  double interior = 0.0;
  double boundary = 0.0;
  [[nodiscard]] double total() const { return interior + boundary; }
};
LossTerms loss_terms(const MlpParams& params, const LossSpec& spec);

/// Exact gradient of `loss` with respect to the flattened parameters.
Vector loss_gradient(const MlpParams& params, const LossSpec& spec);

/// Loss and gradient in one forward/backward sweep.
double loss_and_gradient(const MlpParams& params, const LossSpec& spec, Vector& gradient);

}  // namespace aais

#endif
