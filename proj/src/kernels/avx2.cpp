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

// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check, so this file must not
// instantiate templates (Eigen, <algorithm>, ...) that other translation units also use.

#include <immintrin.h>

#include <cstdint>

#include <aais/kernels.hpp>

namespace aais::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

inline __m256i tail_mask(std::size_t remaining) {
  const auto lane = [remaining](std::size_t i) -> long long { return i < remaining ? -1 : 0; };
  return _mm256_setr_epi64x(lane(0), lane(1), lane(2), lane(3));
}

/// 2^k for integer-valued k in [-1022, 1023].
inline __m256d pow2(__m256d k) {
  // Adding 2^52 + 2^51 leaves k as a two's-complement integer in the low mantissa bits.
  const __m256d magic = splat(6755399441055744.0);
  const __m256i bits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)), _mm256_castpd_si256(magic));
  return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52));
}

/// exp(x) to about one ulp; x < -745 gives 0, x > 709.78 gives +inf.
inline __m256d exp4(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, splat(-745.0), _CMP_LT_OQ);
  const __m256d overflow = _mm256_cmp_pd(x, splat(709.782712893384), _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, splat(709.0)), splat(-745.0));

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, splat(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, splat(1.90821492927058770002e-10), r);

  // Taylor polynomial of degree 13 on |r| <= ln(2)/2, Estrin scheme.
  const __m256d r2 = _mm256_mul_pd(r, r);
  const __m256d r4 = _mm256_mul_pd(r2, r2);
  const __m256d r8 = _mm256_mul_pd(r4, r4);
  const auto pair = [r](double c0, double c1) { return _mm256_fmadd_pd(splat(c1), r, splat(c0)); };
  const __m256d q0 = pair(1.0, 1.0);
  const __m256d q1 = pair(1.0 / 2.0, 1.0 / 6.0);
  const __m256d q2 = pair(1.0 / 24.0, 1.0 / 120.0);
  const __m256d q3 = pair(1.0 / 720.0, 1.0 / 5040.0);
  const __m256d q4 = pair(1.0 / 40320.0, 1.0 / 362880.0);
  const __m256d q5 = pair(1.0 / 3628800.0, 1.0 / 39916800.0);
  const __m256d q6 = pair(1.0 / 479001600.0, 1.0 / 6227020800.0);
  const __m256d s0 = _mm256_fmadd_pd(q1, r2, q0);
  const __m256d s1 = _mm256_fmadd_pd(q3, r2, q2);
  const __m256d s2 = _mm256_fmadd_pd(q5, r2, q4);
  const __m256d u0 = _mm256_fmadd_pd(s1, r4, s0);
  const __m256d u1 = _mm256_fmadd_pd(q6, r4, s2);
  const __m256d p = _mm256_fmadd_pd(u1, r8, u0);

  // Split the scale so that subnormal results stay exact: 2^n = 2^h * 2^(n-h).
  const __m256d half = _mm256_floor_pd(_mm256_mul_pd(n, splat(0.5)));
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(half)), pow2(_mm256_sub_pd(n, half)));
  result = _mm256_andnot_pd(underflow, result);
  return _mm256_blendv_pd(result, splat(__builtin_inf()), overflow);
}

/// tanh(x) to a few ulp. Rational approximation x + x z P(z) / Q(z), z = x^2, below 0.625
/// (Cephes coefficients), (e^2|x| - 1) / (e^2|x| + 1) above; one division for both.
inline __m256d tanh4(__m256d x) {
  const __m256d sign_bit = splat(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  const __m256d z = _mm256_mul_pd(ax, ax);

  __m256d p = _mm256_fmadd_pd(splat(-9.64399179425052238628e-1), z, splat(-9.92877231001918586564e1));
  p = _mm256_fmadd_pd(p, z, splat(-1.61468768441708447952e3));
  __m256d q = _mm256_add_pd(z, splat(1.12811678491632931402e2));
  q = _mm256_fmadd_pd(q, z, splat(2.23548839060100448583e3));
  q = _mm256_fmadd_pd(q, z, splat(4.84406305325125486048e3));

  const __m256d t = exp4(_mm256_min_pd(_mm256_add_pd(ax, ax), splat(40.0)));
  const __m256d use_small = _mm256_cmp_pd(ax, splat(0.625), _CMP_LE_OQ);
  const __m256d num = _mm256_blendv_pd(_mm256_sub_pd(t, splat(1.0)), _mm256_mul_pd(_mm256_mul_pd(ax, z), p), use_small);
  const __m256d den = _mm256_blendv_pd(_mm256_add_pd(t, splat(1.0)), q, use_small);
  const __m256d ratio = _mm256_div_pd(num, den);
  const __m256d magnitude = _mm256_blendv_pd(ratio, _mm256_add_pd(ax, ratio), use_small);
  return _mm256_or_pd(magnitude, _mm256_and_pd(x, sign_bit));
}

struct Lanes {
  __m256i mask;
  bool full;

  [[nodiscard]] __m256d load(const double* p) const { return full ? _mm256_loadu_pd(p) : _mm256_maskload_pd(p, mask); }
  void store(double* p, __m256d v) const {
    if (full) {
      _mm256_storeu_pd(p, v);
    } else {
      _mm256_maskstore_pd(p, mask, v);
    }
  }
};

inline void forward_group(const Lanes& lanes, std::size_t e, std::size_t count, std::size_t directions,
                          const double* z, double* a) {
  const __m256d t = tanh4(lanes.load(z + e));
  const __m256d s = _mm256_fnmadd_pd(t, t, splat(1.0));
  const __m256d minus_two_ts = _mm256_mul_pd(splat(-2.0), _mm256_mul_pd(t, s));
  lanes.store(a + e, t);
  for (std::size_t j = 0; j < directions; ++j) {
    const std::size_t o1 = (1 + j) * count + e;
    const std::size_t o2 = (1 + directions + j) * count + e;
    const __m256d z1 = lanes.load(z + o1);
    const __m256d z2 = lanes.load(z + o2);
    lanes.store(a + o1, _mm256_mul_pd(s, z1));
    lanes.store(a + o2, _mm256_fmadd_pd(minus_two_ts, _mm256_mul_pd(z1, z1), _mm256_mul_pd(s, z2)));
  }
}

inline void backward_group(const Lanes& lanes, std::size_t e, std::size_t count, std::size_t directions,
                           const double* z, const double* a, const double* a_bar, double* z_bar) {
  const __m256d t = lanes.load(a + e);
  const __m256d s = _mm256_fnmadd_pd(t, t, splat(1.0));
  const __m256d ts = _mm256_mul_pd(t, s);
  const __m256d curv = _mm256_mul_pd(s, _mm256_fnmadd_pd(splat(3.0), _mm256_mul_pd(t, t), splat(1.0)));
  const __m256d minus_two_ts = _mm256_mul_pd(splat(-2.0), ts);
  const __m256d minus_four_ts = _mm256_mul_pd(splat(-4.0), ts);
  const __m256d minus_two_curv = _mm256_mul_pd(splat(-2.0), curv);
  __m256d value_bar = _mm256_mul_pd(s, lanes.load(a_bar + e));
  for (std::size_t j = 0; j < directions; ++j) {
    const std::size_t o1 = (1 + j) * count + e;
    const std::size_t o2 = (1 + directions + j) * count + e;
    const __m256d z1 = lanes.load(z + o1);
    const __m256d z2 = lanes.load(z + o2);
    const __m256d g1 = lanes.load(a_bar + o1);
    const __m256d g2 = lanes.load(a_bar + o2);
    lanes.store(z_bar + o2, _mm256_mul_pd(s, g2));
    lanes.store(z_bar + o1, _mm256_fmadd_pd(_mm256_mul_pd(minus_four_ts, z1), g2, _mm256_mul_pd(s, g1)));
    value_bar = _mm256_fmadd_pd(_mm256_mul_pd(minus_two_ts, z1), g1, value_bar);
    value_bar = _mm256_fmadd_pd(_mm256_mul_pd(minus_two_ts, z2), g2, value_bar);
    value_bar = _mm256_fmadd_pd(_mm256_mul_pd(minus_two_curv, _mm256_mul_pd(z1, z1)), g2, value_bar);
  }
  lanes.store(z_bar + e, value_bar);
}

template <class Group>
inline void for_each_group(std::size_t count, Group&& group) {
  const Lanes full{_mm256_setzero_si256(), true};
  std::size_t e = 0;
  for (; e + kLanes <= count; e += kLanes) {
    group(full, e);
  }
  if (e < count) {
    group(Lanes{tail_mask(count - e), false}, e);
  }
}

}  // namespace

bool available() { return true; }

void tanh_jet_forward(std::size_t count, std::size_t directions, const double* z, double* a) {
  for_each_group(count, [&](const Lanes& lanes, std::size_t e) { forward_group(lanes, e, count, directions, z, a); });
}

void tanh_jet_backward(std::size_t count, std::size_t directions, const double* z, const double* a,
                       const double* a_bar, double* z_bar) {
  for_each_group(count, [&](const Lanes& lanes, std::size_t e) {
    backward_group(lanes, e, count, directions, z, a, a_bar, z_bar);
  });
}

void exp_inplace(std::size_t count, double* x) {
  for_each_group(count, [&](const Lanes& lanes, std::size_t e) { lanes.store(x + e, exp4(lanes.load(x + e))); });
}

}  // namespace aais::kernels::avx2
