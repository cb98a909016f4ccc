// Copyright 2026 the pacore authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

// AVX2 lane. Uses plain mul + add (no FMA intrinsics) so td_residuals is
// bit-identical to the scalar lane; exp is a Cephes-style rational
// approximation accurate to ~2 ulp, checked against libm in test_kernels.

#include "pacore/kernels/dispatch.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>
#include <cstring>

namespace pacore::kernels {
namespace {

const __m256i kTailMask[4] = {
    _mm256_set_epi64x(0, 0, 0, 0),
    _mm256_set_epi64x(0, 0, 0, -1),
    _mm256_set_epi64x(0, 0, -1, -1),
    _mm256_set_epi64x(0, -1, -1, -1),
};

// exp(x), valid for finite x; overflows to +inf above 709.78, flushes to 0
// below -708 (the subnormal range is not reproduced).
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d half = _mm256_set1_pd(0.5);

  const __m256d hi_cut = _mm256_set1_pd(709.782712893384);
  const __m256d lo_cut = _mm256_set1_pd(-708.0);
  const __m256d overflow = _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ);
  const __m256d underflow = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi_cut), lo_cut);

  // n = floor(log2e * x + 0.5); r = x - n*ln2 with ln2 split for accuracy
  const __m256d n = _mm256_floor_pd(
      _mm256_add_pd(_mm256_mul_pd(log2e, xc), half));
  __m256d r = _mm256_sub_pd(xc, _mm256_mul_pd(n, c1));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, c2));
  const __m256d rr = _mm256_mul_pd(r, r);

  __m256d pn = _mm256_add_pd(_mm256_mul_pd(p0, rr), p1);
  pn = _mm256_add_pd(_mm256_mul_pd(pn, rr), p2);
  pn = _mm256_mul_pd(pn, r);

  __m256d qn = _mm256_add_pd(_mm256_mul_pd(q0, rr), q1);
  qn = _mm256_add_pd(_mm256_mul_pd(qn, rr), q2);
  qn = _mm256_add_pd(_mm256_mul_pd(qn, rr), q3);

  __m256d e = _mm256_div_pd(pn, _mm256_sub_pd(qn, pn));
  e = _mm256_add_pd(one, _mm256_mul_pd(two, e));

  // scale by 2^(n-1) through the exponent field, then double; n reaches 1024
  // at the top of the range, where a direct 2^n has no finite encoding
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1022)), 52);
  e = _mm256_mul_pd(_mm256_mul_pd(e, _mm256_castsi256_pd(bits)), two);

  e = _mm256_blendv_pd(e, _mm256_set1_pd(0.0), underflow);
  e = _mm256_blendv_pd(
      e, _mm256_set1_pd(__builtin_huge_val()), overflow);
  return e;
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void td_residuals_avx2(const double* rewards, const double* values,
                       double gamma, std::size_t n, double* out) {
  const __m256d g = _mm256_set1_pd(gamma);
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    const __m256d r = _mm256_loadu_pd(rewards + t);
    const __m256d v0 = _mm256_loadu_pd(values + t);
    const __m256d v1 = _mm256_loadu_pd(values + t + 1);
    const __m256d d =
        _mm256_sub_pd(_mm256_add_pd(r, _mm256_mul_pd(g, v1)), v0);
    _mm256_storeu_pd(out + t, d);
  }
  if (t < n) {
    const __m256i m = kTailMask[n - t];
    const __m256d r = _mm256_maskload_pd(rewards + t, m);
    const __m256d v0 = _mm256_maskload_pd(values + t, m);
    const __m256d v1 = _mm256_maskload_pd(values + t + 1, m);
    const __m256d d =
        _mm256_sub_pd(_mm256_add_pd(r, _mm256_mul_pd(g, v1)), v0);
    _mm256_maskstore_pd(out + t, m, d);
  }
}

double half_squared_error_sum_avx2(const double* values, const double* targets,
                                   std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(values + t),
                                    _mm256_loadu_pd(targets + t));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  if (t < n) {
    const __m256i m = kTailMask[n - t];
    const __m256d d = _mm256_sub_pd(_mm256_maskload_pd(values + t, m),
                                    _mm256_maskload_pd(targets + t, m));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  return 0.5 * hsum_pd(acc);
}

void truncated_ratios_avx2(const double* lp_num, const double* lp_den,
                           double cap, std::size_t n, double* out) {
  const __m256d capv = _mm256_set1_pd(cap);
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(lp_num + t),
                                    _mm256_loadu_pd(lp_den + t));
    _mm256_storeu_pd(out + t, _mm256_min_pd(exp_pd(d), capv));
  }
  if (t < n) {
    const __m256i m = kTailMask[n - t];
    const __m256d d = _mm256_sub_pd(_mm256_maskload_pd(lp_num + t, m),
                                    _mm256_maskload_pd(lp_den + t, m));
    _mm256_maskstore_pd(out + t, m, _mm256_min_pd(exp_pd(d), capv));
  }
}

double clipped_surrogate_sum_avx2(const double* lp_new, const double* lp_old,
                                  const double* advantages, double clip_eps,
                                  std::size_t n) {
  const __m256d lo = _mm256_set1_pd(1.0 - clip_eps);
  const __m256d hi = _mm256_set1_pd(1.0 + clip_eps);
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    const __m256d rho = exp_pd(_mm256_sub_pd(_mm256_loadu_pd(lp_new + t),
                                             _mm256_loadu_pd(lp_old + t)));
    const __m256d adv = _mm256_loadu_pd(advantages + t);
    const __m256d unclipped = _mm256_mul_pd(rho, adv);
    const __m256d clipped =
        _mm256_mul_pd(_mm256_min_pd(_mm256_max_pd(rho, lo), hi), adv);
    acc = _mm256_add_pd(acc, _mm256_min_pd(unclipped, clipped));
  }
  if (t < n) {
    // masked-out advantage lanes are 0, so both surrogate terms vanish
    const __m256i m = kTailMask[n - t];
    const __m256d rho = exp_pd(_mm256_sub_pd(_mm256_maskload_pd(lp_new + t, m),
                                             _mm256_maskload_pd(lp_old + t, m)));
    const __m256d adv = _mm256_maskload_pd(advantages + t, m);
    const __m256d unclipped = _mm256_mul_pd(rho, adv);
    const __m256d clipped =
        _mm256_mul_pd(_mm256_min_pd(_mm256_max_pd(rho, lo), hi), adv);
    acc = _mm256_add_pd(acc, _mm256_min_pd(unclipped, clipped));
  }
  return hsum_pd(acc);
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table{
      "avx2",
      td_residuals_avx2,
      half_squared_error_sum_avx2,
      truncated_ratios_avx2,
      clipped_surrogate_sum_avx2,
  };
  return &table;
}

}  // namespace pacore::kernels

#else  // not x86_64

namespace pacore::kernels {
const KernelTable* avx2_table_impl() { return nullptr; }
}  // namespace pacore::kernels

#endif
