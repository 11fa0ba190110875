// AVX2/FMA hazard kernel. Only this file touches 256-bit intrinsics; the
// functions carry a target attribute instead of the whole TU being built with
// -mavx2, so nothing here can leak into code paths that run on older CPUs.

#include <cmath>

#include "scrid/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SCRID_HAVE_X86 1
#else
#define SCRID_HAVE_X86 0
#endif

namespace scrid::kernels {

#if SCRID_HAVE_X86

namespace {

#define SCRID_AVX2 __attribute__((target("avx2,fma")))

// exp(x) for x <= 0 in the Cephes style: x = n ln2 + r with |r| <= ln2/2,
// exp(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)), scaled by 2^n through the
// exponent bits. Accurate to about 1 ulp; arguments below the smallest
// normal result flush to 0.
SCRID_AVX2 inline __m256d exp_nonpositive(__m256d x) {
  const __m256d min_arg = _mm256_set1_pd(-708.39641853226410622);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878E-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300E-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910E-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042E-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192E-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766E-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000009E0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  const __m256d underflow = _mm256_cmp_pd(x, min_arg, _CMP_LT_OQ);
  x = _mm256_max_pd(x, min_arg);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  const __m256d rr = _mm256_mul_pd(r, r);
  const __m256d px = _mm256_mul_pd(r, _mm256_fmadd_pd(_mm256_fmadd_pd(p0, rr, p1), rr, p2));
  const __m256d qx =
      _mm256_fmadd_pd(_mm256_fmadd_pd(_mm256_fmadd_pd(q0, rr, q1), rr, q2), rr, q3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(two, e, one);

  __m256i bits = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, e);
}

SCRID_AVX2 inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

SCRID_AVX2 double hazard_row_avx2(const double* xs, const double* ys, std::size_t n, double sx,
                                  double sy, double lambda0, double neg_inv_two_sigma_sq,
                                  double* h_out) {
  const __m256d vsx = _mm256_set1_pd(sx);
  const __m256d vsy = _mm256_set1_pd(sy);
  const __m256d vl0 = _mm256_set1_pd(lambda0);
  const __m256d vneg = _mm256_set1_pd(neg_inv_two_sigma_sq);
  __m256d acc = _mm256_setzero_pd();

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vsx, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(vsy, _mm256_loadu_pd(ys + j));
    // Same operation order as the scalar kernel, no fused multiply-add: exp
    // amplifies a rounding difference in its argument by |argument|.
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d h = _mm256_mul_pd(vl0, exp_nonpositive(_mm256_mul_pd(d2, vneg)));
    _mm256_storeu_pd(h_out + j, h);
    acc = _mm256_add_pd(acc, h);
  }
  double sum = horizontal_sum(acc);
  for (; j < n; ++j) {
    const double dx = sx - xs[j];
    const double dy = sy - ys[j];
    const double h = lambda0 * std::exp(neg_inv_two_sigma_sq * (dx * dx + dy * dy));
    h_out[j] = h;
    sum += h;
  }
  return sum;
}

bool avx2_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else  // !SCRID_HAVE_X86

// TODO: add a NEON float64x2 variant once there is an aarch64 machine to
// run the equivalence tests on.
double hazard_row_avx2(const double* xs, const double* ys, std::size_t n, double sx, double sy,
                       double lambda0, double neg_inv_two_sigma_sq, double* h_out) {
  return hazard_row_scalar(xs, ys, n, sx, sy, lambda0, neg_inv_two_sigma_sq, h_out);
}

bool avx2_available() { return false; }

#endif

}  // namespace scrid::kernels
