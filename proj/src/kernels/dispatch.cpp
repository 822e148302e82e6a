#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ehmm/kernels.hpp"

namespace ehmm::kernels {

namespace {

std::atomic<std::uint64_t> g_evals{0};

using LseFn = double (*)(const double*, std::size_t);
using GaussLseFn = double (*)(const double*, const double*, std::size_t,
                              double, double, double*);

struct Table {
  Variant variant;
  LseFn lse;
  GaussLseFn gauss;
};

Table make_table(Variant v) {
  switch (v) {
#if defined(__x86_64__) || defined(_M_X64)
    case Variant::avx2:
      return {Variant::avx2, detail::lse_avx2, detail::gauss_lse_avx2};
#endif
#if defined(__aarch64__)
    case Variant::neon:
      return {Variant::neon, detail::lse_neon, detail::gauss_lse_neon};
#endif
    default:
      return {Variant::scalar, detail::lse_scalar, detail::gauss_lse_scalar};
  }
}

Table g_table = make_table(Variant::scalar);

struct Init {
  Init() { select_default(); }
} g_init;

}  // namespace

const char* name(Variant v) {
  switch (v) {
    case Variant::scalar: return "scalar";
    case Variant::avx2: return "avx2";
    case Variant::neon: return "neon";
  }
  return "?";
}

bool available(Variant v) {
  switch (v) {
    case Variant::scalar:
      return true;
    case Variant::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return detail::avx2_supported();
#else
      return false;
#endif
    case Variant::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Variant active() { return g_table.variant; }

bool select(Variant v) {
  if (!available(v)) return false;
  g_table = make_table(v);
  return true;
}

void select_default() {
  if (const char* env = std::getenv("EHMM_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0 && select(Variant::scalar)) return;
    if (std::strcmp(env, "avx2") == 0 && select(Variant::avx2)) return;
    if (std::strcmp(env, "neon") == 0 && select(Variant::neon)) return;
  }
  if (select(Variant::avx2)) return;
  if (select(Variant::neon)) return;
  select(Variant::scalar);
}

double log_sum_exp(const double* v, std::size_t n) { return g_table.lse(v, n); }

double gauss_lse(const double* w, const double* x, std::size_t n, double mu,
                 double half_inv_var, double* scratch) {
  g_evals.fetch_add(n, std::memory_order_relaxed);
  return g_table.gauss(w, x, n, mu, half_inv_var, scratch);
}

std::uint64_t eval_count() { return g_evals.load(std::memory_order_relaxed); }

void reset_eval_count() { g_evals.store(0, std::memory_order_relaxed); }

}  // namespace ehmm::kernels
