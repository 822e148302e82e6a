#include <cmath>
#include <limits>

#include "ehmm/kernels.hpp"

namespace ehmm::kernels::detail {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double lse_scalar(const double* v, std::size_t n) {
  double mx = kNegInf;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] > mx) mx = v[i];
  if (!(mx > kNegInf)) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

double gauss_lse_scalar(const double* w, const double* x, std::size_t n,
                        double mu, double half_inv_var, double* scratch) {
  double mx = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mu;
    const double t = w[i] - half_inv_var * (d * d);
    scratch[i] = t;
    if (t > mx) mx = t;
  }
  if (!(mx > kNegInf)) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(scratch[i] - mx);
  return mx + std::log(s);
}

}  // namespace ehmm::kernels::detail
