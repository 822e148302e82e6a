#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "ehmm/kernels.hpp"

namespace ehmm::kernels::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

// 2^n for integer-valued n in [-1022, 1023], built from exponent bits.
inline __m256d pow2i(__m256d n) {
  __m128i i32 = _mm256_cvtpd_epi32(n);
  __m256i i64 = _mm256_cvtepi32_epi64(i32);
  i64 = _mm256_add_epi64(i64, _mm256_set1_epi64x(1023));
  i64 = _mm256_slli_epi64(i64, 52);
  return _mm256_castsi256_pd(i64);
}

// Vectorized exp: Cody-Waite range reduction, degree-13 Taylor polynomial on
// |r| <= ln2/2, two-step 2^n scaling so the subnormal tail degrades
// gracefully instead of snapping to zero at 2^-1022.
inline __m256d exp4(__m256d x) {
  const __m256d inv_ln2 = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  const __m256d zero_mask =
      _mm256_cmp_pd(x, _mm256_set1_pd(-745.2), _CMP_LT_OQ);
  const __m256d inf_mask =
      _mm256_cmp_pd(x, _mm256_set1_pd(709.782712893384), _CMP_GT_OQ);
  __m256d xc = _mm256_max_pd(x, _mm256_set1_pd(-750.0));
  xc = _mm256_min_pd(xc, _mm256_set1_pd(710.0));

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(xc, inv_ln2), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  __m256d p = _mm256_set1_pd(1.6059043836821615e-10);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868099e-9));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441719e-8));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985891e-7));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985890e-6));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587302e-5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841e-4));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889e-3));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333333e-3));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666667e-2));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666667e-1));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m256d n1 = _mm256_round_pd(
      _mm256_mul_pd(n, _mm256_set1_pd(0.5)), _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
  const __m256d n2 = _mm256_sub_pd(n, n1);
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(n1)), pow2i(n2));

  res = _mm256_andnot_pd(zero_mask, res);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                         inf_mask);
  return res;
}

}  // namespace

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double lse_avx2(const double* v, std::size_t n) {
  std::size_t i = 0;
  __m256d vmax = _mm256_set1_pd(kNegInf);
  for (; i + 4 <= n; i += 4)
    vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(v + i));
  double mx = n >= 4 ? hmax(vmax) : kNegInf;
  for (; i < n; ++i)
    if (v[i] > mx) mx = v[i];
  if (!(mx > kNegInf)) return kNegInf;

  const __m256d vmx = _mm256_set1_pd(mx);
  __m256d vs = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4)
    vs = _mm256_add_pd(vs, exp4(_mm256_sub_pd(_mm256_loadu_pd(v + i), vmx)));
  double s = hsum(vs);
  for (; i < n; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

double gauss_lse_avx2(const double* w, const double* x, std::size_t n,
                      double mu, double half_inv_var, double* scratch) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vnh = _mm256_set1_pd(-half_inv_var);
  __m256d vmax = _mm256_set1_pd(kNegInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmu);
    const __m256d t =
        _mm256_fmadd_pd(_mm256_mul_pd(vnh, d), d, _mm256_loadu_pd(w + i));
    _mm256_storeu_pd(scratch + i, t);
    vmax = _mm256_max_pd(vmax, t);
  }
  double mx = n >= 4 ? hmax(vmax) : kNegInf;
  for (; i < n; ++i) {
    const double d = x[i] - mu;
    const double t = w[i] - half_inv_var * (d * d);
    scratch[i] = t;
    if (t > mx) mx = t;
  }
  if (!(mx > kNegInf)) return kNegInf;

  const __m256d vmx = _mm256_set1_pd(mx);
  __m256d vs = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4)
    vs = _mm256_add_pd(
        vs, exp4(_mm256_sub_pd(_mm256_loadu_pd(scratch + i), vmx)));
  double s = hsum(vs);
  for (; i < n; ++i) s += std::exp(scratch[i] - mx);
  return mx + std::log(s);
}

}  // namespace ehmm::kernels::detail

#endif  // x86_64
