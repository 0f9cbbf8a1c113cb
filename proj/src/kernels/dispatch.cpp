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

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace aais::kernels {

#if !defined(AAIS_HAVE_AVX2_KERNELS)
namespace avx2 {
bool available() { return false; }
void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a) {
  scalar::tanh_jet_forward(count, directions, z, a);
}
void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar) {
  scalar::tanh_jet_backward(count, directions, z, a, a_bar, z_bar);
}
void exp_inplace(std::size_t count, double* x) { scalar::exp_inplace(count, x); }
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("AAIS_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::kScalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() { return avx2::available() && cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::kAvx2 && detected_isa() != Isa::kAvx2) {
    isa = Isa::kScalar;
  }
  current().store(isa, std::memory_order_relaxed);
}

const char* to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a) {
  if (active_isa() == Isa::kAvx2) {
    avx2::tanh_jet_forward(count, directions, z, a);
  } else {
    scalar::tanh_jet_forward(count, directions, z, a);
  }
}

void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar) {
  if (active_isa() == Isa::kAvx2) {
    avx2::tanh_jet_backward(count, directions, z, a, a_bar, z_bar);
  } else {
    scalar::tanh_jet_backward(count, directions, z, a, a_bar, z_bar);
  }
}

void exp_inplace(std::size_t count, double* x) {
  if (active_isa() == Isa::kAvx2) {
    avx2::exp_inplace(count, x);
  } else {
    scalar::exp_inplace(count, x);
  }
}

}  // namespace aais::kernels
