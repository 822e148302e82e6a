#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "ehmm/kernels.hpp"

namespace ehmm::kernels::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 2^n for integer-valued n in [-1022, 1023].
inline float64x2_t pow2i(float64x2_t n) {
  int64x2_t i64 = vcvtq_s64_f64(n);
  i64 = vaddq_s64(i64, vdupq_n_s64(1023));
  i64 = vshlq_n_s64(i64, 52);
  return vreinterpretq_f64_s64(i64);
}

// Same algorithm as the AVX2 variant: Cody-Waite reduction, degree-13
// Taylor polynomial, two-step 2^n scaling.
inline float64x2_t exp2w(float64x2_t x) {
  const float64x2_t inv_ln2 = vdupq_n_f64(1.4426950408889634074);
  const float64x2_t ln2_hi = vdupq_n_f64(6.93147180369123816490e-01);
  const float64x2_t ln2_lo = vdupq_n_f64(1.90821492927058770002e-10);

  const uint64x2_t zero_mask = vcltq_f64(x, vdupq_n_f64(-745.2));
  const uint64x2_t inf_mask = vcgtq_f64(x, vdupq_n_f64(709.782712893384));
  float64x2_t xc = vmaxq_f64(x, vdupq_n_f64(-750.0));
  xc = vminq_f64(xc, vdupq_n_f64(710.0));

  const float64x2_t n = vrndnq_f64(vmulq_f64(xc, inv_ln2));
  float64x2_t r = vfmsq_f64(xc, n, ln2_hi);
  r = vfmsq_f64(r, n, ln2_lo);

  float64x2_t p = vdupq_n_f64(1.6059043836821615e-10);
  p = vfmaq_f64(vdupq_n_f64(2.0876756987868099e-9), p, r);
  p = vfmaq_f64(vdupq_n_f64(2.5052108385441719e-8), p, r);
  p = vfmaq_f64(vdupq_n_f64(2.7557319223985891e-7), p, r);
  p = vfmaq_f64(vdupq_n_f64(2.7557319223985890e-6), p, r);
  p = vfmaq_f64(vdupq_n_f64(2.4801587301587302e-5), p, r);
  p = vfmaq_f64(vdupq_n_f64(1.9841269841269841e-4), p, r);
  p = vfmaq_f64(vdupq_n_f64(1.3888888888888889e-3), p, r);
  p = vfmaq_f64(vdupq_n_f64(8.3333333333333333e-3), p, r);
  p = vfmaq_f64(vdupq_n_f64(4.1666666666666667e-2), p, r);
  p = vfmaq_f64(vdupq_n_f64(1.6666666666666667e-1), p, r);
  p = vfmaq_f64(vdupq_n_f64(0.5), p, r);
  p = vfmaq_f64(vdupq_n_f64(1.0), p, r);
  p = vfmaq_f64(vdupq_n_f64(1.0), p, r);

  const float64x2_t n1 = vrndmq_f64(vmulq_f64(n, vdupq_n_f64(0.5)));
  const float64x2_t n2 = vsubq_f64(n, n1);
  float64x2_t res = vmulq_f64(vmulq_f64(p, pow2i(n1)), pow2i(n2));

  res = vbslq_f64(zero_mask, vdupq_n_f64(0.0), res);
  res = vbslq_f64(inf_mask,
                  vdupq_n_f64(std::numeric_limits<double>::infinity()), res);
  return res;
}

}  // namespace

double lse_neon(const double* v, std::size_t n) {
  std::size_t i = 0;
  float64x2_t vmax = vdupq_n_f64(kNegInf);
  for (; i + 2 <= n; i += 2) vmax = vmaxq_f64(vmax, vld1q_f64(v + i));
  double mx = n >= 2 ? vmaxvq_f64(vmax) : kNegInf;
  for (; i < n; ++i)
    if (v[i] > mx) mx = v[i];
  if (!(mx > kNegInf)) return kNegInf;

  const float64x2_t vmx = vdupq_n_f64(mx);
  float64x2_t vs = vdupq_n_f64(0.0);
  i = 0;
  for (; i + 2 <= n; i += 2)
    vs = vaddq_f64(vs, exp2w(vsubq_f64(vld1q_f64(v + i), vmx)));
  double s = vaddvq_f64(vs);
  for (; i < n; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

double gauss_lse_neon(const double* w, const double* x, std::size_t n,
                      double mu, double half_inv_var, double* scratch) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vnh = vdupq_n_f64(-half_inv_var);
  float64x2_t vmax = vdupq_n_f64(kNegInf);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vmu);
    const float64x2_t t = vfmaq_f64(vld1q_f64(w + i), vmulq_f64(vnh, d), d);
    vst1q_f64(scratch + i, t);
    vmax = vmaxq_f64(vmax, t);
  }
  double mx = n >= 2 ? vmaxvq_f64(vmax) : kNegInf;
  for (; i < n; ++i) {
    const double d = x[i] - mu;
    const double t = w[i] - half_inv_var * (d * d);
    scratch[i] = t;
    if (t > mx) mx = t;
  }
  if (!(mx > kNegInf)) return kNegInf;

  const float64x2_t vmx = vdupq_n_f64(mx);
  float64x2_t vs = vdupq_n_f64(0.0);
  i = 0;
  for (; i + 2 <= n; i += 2)
    vs = vaddq_f64(vs, exp2w(vsubq_f64(vld1q_f64(scratch + i), vmx)));
  double s = vaddvq_f64(vs);
  for (; i < n; ++i) s += std::exp(scratch[i] - mx);
  return mx + std::log(s);
}

}  // namespace ehmm::kernels::detail

#endif  // __aarch64__
