#pragma once

#include <cstddef>
#include <cstdint>

// Log-domain reduction kernels behind the forward/backward recursions. The
// hot loop evaluates, for one lattice cell, log sum_l exp(w[l] + logN(d_l))
// with a shared Gaussian width: that is `gauss_lse`. A scalar reference
// implementation always exists; wider variants are selected at runtime from
// CPU capabilities and must agree with the reference (equivalence-tested).
namespace ehmm::kernels {

enum class Variant { scalar, avx2, neon };

const char* name(Variant v);
bool available(Variant v);

// Currently selected variant.
Variant active();

// Selects a variant explicitly; returns false (and keeps the current
// selection) if it is not available on this host.
bool select(Variant v);

// Selects the widest available variant, unless overridden by the
// EHMM_KERNEL environment variable (scalar|avx2|neon).
void select_default();

// log(sum_i exp(v[i])). Requires n >= 1; all-(-inf) input yields -inf.
// Stable under max-shift: log_sum_exp(v + c) = log_sum_exp(v) + c.
double log_sum_exp(const double* v, std::size_t n);

// log(sum_i exp(w[i] - half_inv_var * (x[i] - mu)^2)).
// scratch must hold at least n doubles. w entries may be -inf.
double gauss_lse(const double* w, const double* x, std::size_t n, double mu,
                 double half_inv_var, double* scratch);

// Cumulative count of gauss_lse element evaluations, for complexity checks.
std::uint64_t eval_count();
void reset_eval_count();

namespace detail {
double lse_scalar(const double* v, std::size_t n);
double gauss_lse_scalar(const double* w, const double* x, std::size_t n,
                        double mu, double half_inv_var, double* scratch);
#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
double lse_avx2(const double* v, std::size_t n);
double gauss_lse_avx2(const double* w, const double* x, std::size_t n,
                      double mu, double half_inv_var, double* scratch);
#endif
#if defined(__aarch64__)
double lse_neon(const double* v, std::size_t n);
double gauss_lse_neon(const double* w, const double* x, std::size_t n,
                      double mu, double half_inv_var, double* scratch);
#endif
}  // namespace detail

}  // namespace ehmm::kernels
