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

#include <aais/kernels.hpp>

#include <cmath>

namespace aais::kernels::scalar {

// With a = tanh(z) and s = 1 - a^2:
//   a'  = s z'
//   a'' = s z'' - 2 a s z'^2
void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a) {
  for (std::size_t e = 0; e < count; ++e) {
    const double t = std::tanh(z[e]);
    const double s = 1.0 - t * t;
    a[e] = t;
    for (std::size_t j = 0; j < directions; ++j) {
      const double z1 = z[(1 + j) * count + e];
      const double z2 = z[(1 + directions + j) * count + e];
      a[(1 + j) * count + e] = s * z1;
      a[(1 + directions + j) * count + e] = s * z2 - 2.0 * t * s * z1 * z1;
    }
  }
}

// Partials of the forward map, with ds/dz = -2 a s and d(a s)/dz = s (1 - 3 a^2):
//   z''_bar = s a''_bar
//   z'_bar  = s a'_bar - 4 a s z' a''_bar
//   z_bar   = s a_bar + sum_j [ -2 a s z'_j a'_bar_j
//                               - 2 a s z''_j a''_bar_j - 2 s (1 - 3 a^2) z'_j^2 a''_bar_j ]
void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar) {
  for (std::size_t e = 0; e < count; ++e) {
    const double t = a[e];
    const double s = 1.0 - t * t;
    const double ts = t * s;
    const double curv = s * (1.0 - 3.0 * t * t);
    double value_bar = s * a_bar[e];
    for (std::size_t j = 0; j < directions; ++j) {
      const std::size_t i1 = (1 + j) * count + e;
      const std::size_t i2 = (1 + directions + j) * count + e;
      const double z1 = z[i1];
      const double z2 = z[i2];
      const double g1 = a_bar[i1];
      const double g2 = a_bar[i2];
      z_bar[i2] = s * g2;
      z_bar[i1] = s * g1 - 4.0 * ts * z1 * g2;
      value_bar += -2.0 * ts * z1 * g1 - 2.0 * ts * z2 * g2 - 2.0 * curv * z1 * z1 * g2;
    }
    z_bar[e] = value_bar;
  }
}

void exp_inplace(std::size_t count, double* x) {
  for (std::size_t e = 0; e < count; ++e) {
    x[e] = x[e] < -745.0 ? 0.0 : std::exp(x[e]);
  }
}

}  // namespace aais::kernels::scalar
