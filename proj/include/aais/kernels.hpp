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

#ifndef AAIS_KERNELS_HPP
#define AAIS_KERNELS_HPP

#include <cstddef>

/**
 * \file
 * \brief Elementwise inner-loop kernels with a scalar reference and SIMD variants.
 *
 * Every kernel exists once in `scalar::` (the reference) and, when built, once in `avx2::`.
 * The unqualified entry points forward to the variant selected at runtime: the best ISA the
 * CPU supports, unless the `AAIS_SIMD` environment variable is set to `scalar` or
 * `set_isa()` overrides it.
 *
 * Jet layout. A tanh layer in Taylor mode carries, for every neuron and point, the value
 * and for each of `directions` input directions a first and a second directional
 * derivative. The buffers hold `1 + 2 * directions` contiguous blocks of `count` doubles:
 * block 0 is the value, blocks `1..directions` the first derivatives and blocks
 * `1 + directions .. 2 * directions` the second derivatives.
 */

namespace aais::kernels {

enum class Isa { kScalar, kAvx2 };

/// Best ISA supported by this CPU and this build.
Isa detected_isa();

/// ISA the dispatching entry points currently use.
Isa active_isa();

/// Forces a variant. Falls back to scalar if the requested ISA is unavailable.
/// Not synchronized with concurrent kernel calls.
void set_isa(Isa isa);

const char* to_string(Isa isa);

/// a = tanh-jet(z). See the layout note above.
void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a);

/// Adjoint of tanh_jet_forward: given z, a = tanh_jet_forward(z) and the adjoint of a,
/// writes the adjoint of z (all blocks).
void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar);

/// x[i] = exp(x[i]). Inputs below -745 flush to 0.
void exp_inplace(std::size_t count, double* x);

namespace scalar {
void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a);
void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar);
void exp_inplace(std::size_t count, double* x);
}  // namespace scalar

namespace avx2 {
/// True when the AVX2 variants were compiled in.
bool available();
void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a);
void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar);
void exp_inplace(std::size_t count, double* x);
}  // namespace avx2

}  // namespace aais::kernels

#endif
