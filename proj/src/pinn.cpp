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

#include <aais/pinn.hpp>

#include <cmath>
#include <string>

#include <aais/kernels.hpp>

namespace aais {

MlpParams MlpParams::zeros(const std::vector<Eigen::Index>& sizes) {
  if (sizes.size() < 2) {
    throw InvalidArgument("network needs at least an input and an output layer");
  }
  for (const auto s : sizes) {
    if (s < 1) {
      throw InvalidArgument("layer sizes must be positive");
    }
  }
  if (sizes.back() != 1) {
    throw InvalidArgument("network output must be scalar");
  }
  MlpParams params;
  params.layer_sizes = sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    params.weights.emplace_back(Matrix::Zero(sizes[l + 1], sizes[l]));
    params.biases.emplace_back(Vector::Zero(sizes[l + 1]));
  }
  return params;
}

Eigen::Index MlpParams::parameter_count() const {
  Eigen::Index total = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    total += weights[l].size() + biases[l].size();
  }
  return total;
}

Vector MlpParams::flatten() const {
  Vector theta(parameter_count());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    theta.segment(offset, weights[l].size()) = weights[l].reshaped();
    offset += weights[l].size();
    theta.segment(offset, biases[l].size()) = biases[l];
    offset += biases[l].size();
  }
  return theta;
}

void MlpParams::assign(const Vector& theta) {
  if (theta.size() != parameter_count()) {
    throw DimensionError("parameter vector has " + std::to_string(theta.size()) + " entries, expected " +
                         std::to_string(parameter_count()));
  }
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l].reshaped() = theta.segment(offset, weights[l].size());
    offset += weights[l].size();
    biases[l] = theta.segment(offset, biases[l].size());
    offset += biases[l].size();
  }
}

MlpParams MlpParams::unflatten(const std::vector<Eigen::Index>& sizes, const Vector& theta) {
  MlpParams params = zeros(sizes);
  params.assign(theta);
  return params;
}

MlpParams init_params(const std::vector<Eigen::Index>& sizes, Rng& rng) {
  MlpParams params = MlpParams::zeros(sizes);
  for (auto& w : params.weights) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = dist(rng);
      }
    }
  }
  return params;
}

std::vector<Eigen::Index> mlp_sizes(Eigen::Index input_dim, Eigen::Index width, Eigen::Index depth) {
  if (input_dim < 1 || width < 1 || depth < 1) {
    throw InvalidArgument("mlp_sizes: dimensions must be positive");
  }
  std::vector<Eigen::Index> sizes{input_dim};
  sizes.insert(sizes.end(), static_cast<std::size_t>(depth), width);
  sizes.push_back(1);
  return sizes;
}

namespace {

// Pre-activations z[l] and layer inputs a[l] (a[0] is the input jet) for one sweep.
// Kept per thread so repeated loss evaluations reuse the buffers; jet sweeps and value-only
// sweeps use separate tapes because their column counts differ.
struct Tape {
  std::vector<Matrix> z;
  std::vector<Matrix> a;
  std::vector<Matrix> z_bar;
  Matrix a_bar;
  Eigen::Index points = 0;
  Eigen::Index directions = 0;
};

enum class TapeSlot { kJets, kValues };

Tape& local_tape(TapeSlot slot) {
  thread_local Tape jets;
  thread_local Tape values;
  return slot == TapeSlot::kJets ? jets : values;
}

Eigen::Index blocks(Eigen::Index directions) { return 1 + 2 * directions; }

void run_forward(const MlpParams& params, const PointSet& points, bool with_jets, Tape& tape) {
  require_dim(params.input_dim(), points.rows(), "network input");
  const Eigen::Index n = points.cols();
  const Eigen::Index d = points.rows();
  const Eigen::Index dirs = with_jets ? d : 0;
  const std::size_t layers = params.layer_count();
  tape.points = n;
  tape.directions = dirs;
  tape.z.resize(layers);
  tape.a.resize(layers);

  Matrix& input = tape.a[0];
  input.setZero(d, blocks(dirs) * n);
  input.leftCols(n) = points;
  for (Eigen::Index j = 0; j < dirs; ++j) {
    input.block(j, (1 + j) * n, 1, n).setOnes();
  }

  for (std::size_t l = 0; l < layers; ++l) {
    Matrix& z = tape.z[l];
    z.resize(params.weights[l].rows(), tape.a[l].cols());
    z.noalias() = params.weights[l] * tape.a[l];
    z.leftCols(n).colwise() += params.biases[l];
    if (l + 1 < layers) {
      Matrix& next = tape.a[l + 1];
      next.resize(z.rows(), z.cols());
      kernels::tanh_jet_forward(static_cast<std::size_t>(z.rows() * n), static_cast<std::size_t>(dirs), z.data(),
                                next.data());
    }
  }
}

// `out_bar` is the adjoint of the last pre-activation (1 x blocks * N). Accumulates into
// `gradient` in flatten() order.
void run_backward(const MlpParams& params, const Matrix& out_bar, Tape& tape, Vector& gradient) {
  const std::size_t layers = params.layer_count();
  const Eigen::Index n = tape.points;
  const auto dirs = static_cast<std::size_t>(tape.directions);
  tape.z_bar.resize(layers);
  tape.z_bar[layers - 1] = out_bar;

  std::vector<Eigen::Index> offsets(layers);
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = offset;
    offset += params.weights[l].size() + params.biases[l].size();
  }

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& z_bar = tape.z_bar[l];
    const Matrix& w = params.weights[l];
    Eigen::Map<Matrix> w_grad(gradient.data() + offsets[l], w.rows(), w.cols());
    w_grad.noalias() += z_bar * tape.a[l].transpose();
    gradient.segment(offsets[l] + w.size(), w.rows()) += z_bar.leftCols(n).rowwise().sum();
    if (l > 0) {
      tape.a_bar.resize(w.cols(), z_bar.cols());
      tape.a_bar.noalias() = w.transpose() * z_bar;
      Matrix& prev = tape.z_bar[l - 1];
      prev.resize(tape.z[l - 1].rows(), tape.z[l - 1].cols());
      kernels::tanh_jet_backward(static_cast<std::size_t>(prev.rows() * n), dirs, tape.z[l - 1].data(),
                                 tape.a[l].data(), tape.a_bar.data(), prev.data());
    }
  }
}

FieldJets jets_from_output(const Matrix& out, Eigen::Index n, Eigen::Index d) {
  FieldJets jets;
  jets.value = out.leftCols(n).transpose();
  jets.gradient.resize(d, n);
  jets.laplacian = Vector::Zero(n);
  for (Eigen::Index j = 0; j < d; ++j) {
    jets.gradient.row(j) = out.block(0, (1 + j) * n, 1, n);
    jets.laplacian += out.block(0, (1 + d + j) * n, 1, n).transpose();
  }
  return jets;
}

Vector weights_or_ones(const Vector& weights, Eigen::Index n, const char* what) {
  if (weights.size() == 0) {
    return Vector::Ones(n);
  }
  if (weights.size() != n) {
    throw DimensionError(std::string(what) + ": weight count does not match point count");
  }
  return weights;
}

// Runs both sweeps when `gradient` is non-null.
LossTerms evaluate_loss(const MlpParams& params, const LossSpec& spec, Vector* gradient) {
  require_dim(spec.problem.dim(), params.input_dim(), "loss");
  if (spec.interior.cols() == 0) {
    throw InvalidArgument("loss needs at least one interior point");
  }
  LossTerms terms;
  if (gradient != nullptr) {
    gradient->setZero(params.parameter_count());
  }

  {
    const Eigen::Index n = spec.interior.cols();
    const Eigen::Index d = spec.interior.rows();
    const Vector w = weights_or_ones(spec.interior_weights, n, "interior");
    Tape& tape = local_tape(TapeSlot::kJets);
    run_forward(params, spec.interior, true, tape);
    const FieldJets jets = jets_from_output(tape.z.back(), n, d);
    const Vector r = spec.problem.interior_residual(spec.interior, jets);
    const double inv = 1.0 / static_cast<double>(n);
    terms.interior = inv * (w.array() * r.array().square()).sum();
    if (gradient != nullptr) {
      const JetPartials partials = spec.problem.interior_residual_partials(spec.interior, jets);
      const Vector r_bar = (2.0 * inv) * (w.array() * r.array()).matrix();
      Matrix out_bar(1, blocks(d) * n);
      out_bar.leftCols(n) = (r_bar.array() * partials.value.array()).matrix().transpose();
      for (Eigen::Index j = 0; j < d; ++j) {
        out_bar.block(0, (1 + j) * n, 1, n) = (r_bar.array() * partials.gradient.row(j).transpose().array()).transpose();
        out_bar.block(0, (1 + d + j) * n, 1, n) = (r_bar.array() * partials.laplacian.array()).transpose();
      }
      run_backward(params, out_bar, tape, *gradient);
    }
  }

  if (spec.boundary.cols() > 0) {
    const Eigen::Index n = spec.boundary.cols();
    const Vector w = weights_or_ones(spec.boundary_weights, n, "boundary");
    Tape& tape = local_tape(TapeSlot::kValues);
    run_forward(params, spec.boundary, false, tape);
    const Vector misfit = tape.z.back().row(0).transpose() - spec.problem.boundary_values(spec.boundary);
    const double inv = 1.0 / static_cast<double>(n);
    terms.boundary = inv * (w.array() * misfit.array().square()).sum();
    if (gradient != nullptr) {
      const Matrix out_bar = ((2.0 * inv) * (w.array() * misfit.array())).matrix().transpose();
      run_backward(params, out_bar, tape, *gradient);
    }
  }
  return terms;
}

}  // namespace

Vector forward(const MlpParams& params, const PointSet& points) {
  Tape& tape = local_tape(TapeSlot::kValues);
  run_forward(params, points, false, tape);
  return tape.z.back().row(0).transpose();
}

double forward_at(const MlpParams& params, const Eigen::Ref<const Vector>& x) {
  const PointSet point = x;
  return forward(params, point)(0);
}

FieldJets input_jets(const MlpParams& params, const PointSet& points) {
  Tape& tape = local_tape(TapeSlot::kJets);
  run_forward(params, points, true, tape);
  return jets_from_output(tape.z.back(), points.cols(), points.rows());
}

InputDerivatives input_derivatives(const MlpParams& params, const Eigen::Ref<const Vector>& x) {
  const PointSet point = x;
  const FieldJets jets = input_jets(params, point);
  return {jets.value(0), jets.gradient.col(0), jets.laplacian(0)};
}

LossTerms loss_terms(const MlpParams& params, const LossSpec& spec) { return evaluate_loss(params, spec, nullptr); }

double loss(const MlpParams& params, const LossSpec& spec) { return loss_terms(params, spec).total(); }

Vector loss_gradient(const MlpParams& params, const LossSpec& spec) {
  Vector gradient;
  evaluate_loss(params, spec, &gradient);
  return gradient;
}

double loss_and_gradient(const MlpParams& params, const LossSpec& spec, Vector& gradient) {
  return evaluate_loss(params, spec, &gradient).total();
}

}  // namespace aais
