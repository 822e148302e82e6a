#include "ehmm/lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ehmm/kernels.hpp"

namespace ehmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scratch buffers shared by the row loops of one recursion.
struct Workspace {
  std::vector<double> gamma;
  std::vector<double> means;
  std::vector<double> terms;
  std::vector<double> scratch;

  explicit Workspace(std::size_t L)
      : gamma(L), means(L), terms(L), scratch(L) {}
};

void gamma_row(const ModelDensities& model, const ParamVec& theta,
               const PoolParams& pp, const ObservedSeries& z,
               const PoolSet& pool, std::size_t i, std::vector<double>& out) {
  const auto kt = detail::kappa_terms(pp, z.y[i]);
  const auto row = pool.row(i);
  if (z.observed(i)) {
    const std::int64_t y = z.count(i);
    for (std::size_t l = 0; l < pool.L; ++l)
      out[l] = model.log_emit(theta, y, row[l]) -
               detail::log_kappa_with(kt, row[l]);
  } else {
    for (std::size_t l = 0; l < pool.L; ++l)
      out[l] = -detail::log_kappa_with(kt, row[l]);
  }
}

// Fills backward rows [lo, hi] given that row hi+1 is populated.
void backward_fill(const ModelDensities& model, const ParamVec& theta,
                   LogLattice& lat, const PoolSet& pool,
                   const ObservedSeries& z, const PoolParams& pp,
                   std::size_t hi, std::size_t lo, Workspace& ws) {
  const std::size_t L = pool.L;
  const auto gt = model.gaussian_transition(theta);
  const double hiv = gt ? 0.5 * gt->inv_sd * gt->inv_sd : 0.0;
  for (std::size_t i = hi + 1; i-- > lo;) {
    gamma_row(model, theta, pp, z, pool, i + 1, ws.gamma);
    const auto next = lat.row(i + 1);
    const auto next_m = pool.row(i + 1);
    const auto cur_m = pool.row(i);
    for (std::size_t l = 0; l < L; ++l) ws.terms[l] = next[l] + ws.gamma[l];
    auto out = lat.row(i);
    if (gt) {
      for (std::size_t l = 0; l < L; ++l)
        ws.means[l] = model.transition_mean(theta, cur_m[l]);
      for (std::size_t j = 0; j < L; ++j)
        out[j] = kernels::gauss_lse(ws.terms.data(), next_m.data(), L,
                                    ws.means[j], hiv, ws.scratch.data()) +
                 gt->log_norm;
    } else {
      for (std::size_t j = 0; j < L; ++j) {
        for (std::size_t l = 0; l < L; ++l)
          ws.scratch[l] =
              ws.terms[l] + model.log_trans(theta, cur_m[j], next_m[l]);
        out[j] = kernels::log_sum_exp(ws.scratch.data(), L);
      }
    }
  }
}

}  // namespace

double log_gamma_factor(const ModelDensities& model, const ParamVec& theta,
                        const PoolParams& pp, const ObservedSeries& z,
                        std::size_t i, double m) {
  const double lk = log_kappa(pp, m, z.y[i]);
  if (z.observed(i)) return model.log_emit(theta, z.count(i), m) - lk;
  return -lk;
}

LogLattice forward(const ModelDensities& model, const ParamVec& theta,
                   const PoolSet& pool, const ObservedSeries& z,
                   const PoolParams& pp) {
  if (pool.n != z.size())
    throw std::invalid_argument("forward: pool/observation length mismatch");
  const std::size_t n = pool.n, L = pool.L;
  LogLattice lat{LatticeKind::forward, n, L, 0,
                 std::vector<double>(n * L)};
  Workspace ws(L);

  gamma_row(model, theta, pp, z, pool, 0, ws.gamma);
  {
    auto out = lat.row(0);
    const auto m0 = pool.row(0);
    for (std::size_t j = 0; j < L; ++j)
      out[j] = model.log_init(theta, m0[j]) + ws.gamma[j];
  }

  const auto gt = model.gaussian_transition(theta);
  const double hiv = gt ? 0.5 * gt->inv_sd * gt->inv_sd : 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    gamma_row(model, theta, pp, z, pool, i, ws.gamma);
    const auto prev = lat.row(i - 1);
    const auto prev_m = pool.row(i - 1);
    const auto cur_m = pool.row(i);
    auto out = lat.row(i);
    if (gt) {
      for (std::size_t l = 0; l < L; ++l)
        ws.means[l] = model.transition_mean(theta, prev_m[l]);
      for (std::size_t j = 0; j < L; ++j)
        out[j] = kernels::gauss_lse(prev.data(), ws.means.data(), L, cur_m[j],
                                    hiv, ws.scratch.data()) +
                 gt->log_norm + ws.gamma[j];
    } else {
      for (std::size_t j = 0; j < L; ++j) {
        for (std::size_t l = 0; l < L; ++l)
          ws.scratch[l] =
              prev[l] + model.log_trans(theta, prev_m[l], cur_m[j]);
        out[j] = kernels::log_sum_exp(ws.scratch.data(), L) + ws.gamma[j];
      }
    }
  }
  return lat;
}

EnsembleLogDensity ensemble_log_density(const ModelDensities& model,
                                        const ParamVec& theta,
                                        const LogLattice& fwd) {
  if (fwd.kind != LatticeKind::forward)
    throw std::invalid_argument("ensemble_log_density: forward lattice required");
  const double prior = model.log_prior(theta);
  if (prior == kNegInf) return {kNegInf, theta};
  const auto last = fwd.row(fwd.n - 1);
  return {prior + kernels::log_sum_exp(last.data(), last.size()), theta};
}

LogLattice backward_partial(const ModelDensities& model, const ParamVec& theta,
                            const PoolSet& pool, const ObservedSeries& z,
                            const PoolParams& pp, std::size_t low_row) {
  if (pool.n != z.size())
    throw std::invalid_argument("backward: pool/observation length mismatch");
  if (low_row >= pool.n)
    throw std::invalid_argument("backward: low_row out of range");
  const std::size_t n = pool.n, L = pool.L;
  LogLattice lat{LatticeKind::backward, n, L, low_row,
                 std::vector<double>(n * L)};
  auto last = lat.row(n - 1);
  for (std::size_t l = 0; l < L; ++l) last[l] = 0.0;
  if (low_row < n - 1) {
    Workspace ws(L);
    backward_fill(model, theta, lat, pool, z, pp, n - 2, low_row, ws);
  }
  return lat;
}

void extend_backward(const ModelDensities& model, const ParamVec& theta,
                     LogLattice& lat, const PoolSet& pool,
                     const ObservedSeries& z, const PoolParams& pp) {
  if (lat.kind != LatticeKind::backward)
    throw std::invalid_argument("extend_backward: backward lattice required");
  if (lat.low_row == 0) return;
  Workspace ws(pool.L);
  backward_fill(model, theta, lat, pool, z, pp, lat.low_row - 1, 0, ws);
  lat.low_row = 0;
}

EnsembleLogDensity first_stage_log_density(const ModelDensities& model,
                                           const ParamVec& theta,
                                           const LogLattice& lat,
                                           const PoolSet& pool,
                                           const ObservedSeries& z,
                                           std::size_t stage_row) {
  if (lat.kind != LatticeKind::backward || lat.low_row > stage_row)
    throw std::invalid_argument("first_stage_log_density: row not populated");
  const double prior = model.log_prior(theta);
  if (prior == kNegInf) return {kNegInf, theta};
  const std::size_t L = pool.L;
  const auto beta = lat.row(stage_row);
  const auto m = pool.row(stage_row);
  const double log_u = -std::log(static_cast<double>(L));
  std::vector<double> terms(L);
  if (z.observed(stage_row)) {
    const std::int64_t y = z.count(stage_row);
    for (std::size_t l = 0; l < L; ++l)
      terms[l] = log_u + model.log_emit(theta, y, m[l]) + beta[l];
  } else {
    for (std::size_t l = 0; l < L; ++l) terms[l] = log_u + beta[l];
  }
  return {prior + kernels::log_sum_exp(terms.data(), L), theta};
}

EnsembleLogDensity full_log_density_backward(const ModelDensities& model,
                                             const ParamVec& theta,
                                             const LogLattice& lat,
                                             const PoolSet& pool,
                                             const ObservedSeries& z,
                                             const PoolParams& pp) {
  if (lat.kind != LatticeKind::backward || lat.low_row != 0)
    throw std::invalid_argument("full_log_density_backward: lattice incomplete");
  const double prior = model.log_prior(theta);
  if (prior == kNegInf) return {kNegInf, theta};
  const std::size_t L = pool.L;
  std::vector<double> gamma(L), terms(L);
  Workspace ws(L);
  gamma_row(model, theta, pp, z, pool, 0, gamma);
  const auto beta = lat.row(0);
  const auto m = pool.row(0);
  for (std::size_t l = 0; l < L; ++l)
    terms[l] = model.log_init(theta, m[l]) + gamma[l] + beta[l];
  return {prior + kernels::log_sum_exp(terms.data(), L), theta};
}

LatentSequence sample_sequence_backward(Rng& rng, const ModelDensities& model,
                                        const ParamVec& theta,
                                        const LogLattice& fwd,
                                        const PoolSet& pool) {
  if (fwd.kind != LatticeKind::forward)
    throw std::invalid_argument("sample_sequence_backward: forward lattice required");
  const std::size_t n = pool.n, L = pool.L;
  LatentSequence seq;
  seq.m.resize(n);
  std::vector<double> terms(L);
  std::size_t pick = detail::categorical_log(rng, fwd.row(n - 1));
  seq.m[n - 1] = pool.at(n - 1, pick);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double next_m = seq.m[i + 1];
    const auto alpha = fwd.row(i);
    const auto m = pool.row(i);
    for (std::size_t l = 0; l < L; ++l)
      terms[l] = alpha[l] + model.log_trans(theta, m[l], next_m);
    pick = detail::categorical_log(rng, terms);
    seq.m[i] = m[pick];
  }
  return seq;
}

LatentSequence sample_sequence_forward(Rng& rng, const ModelDensities& model,
                                       const ParamVec& theta,
                                       const LogLattice& lat,
                                       const PoolSet& pool,
                                       const ObservedSeries& z,
                                       const PoolParams& pp) {
  if (lat.kind != LatticeKind::backward || lat.low_row != 0)
    throw std::invalid_argument("sample_sequence_forward: lattice incomplete");
  const std::size_t n = pool.n, L = pool.L;
  LatentSequence seq;
  seq.m.resize(n);
  std::vector<double> gamma(L), terms(L);
  gamma_row(model, theta, pp, z, pool, 0, gamma);
  {
    const auto beta = lat.row(0);
    const auto m = pool.row(0);
    for (std::size_t l = 0; l < L; ++l)
      terms[l] = model.log_init(theta, m[l]) + gamma[l] + beta[l];
  }
  std::size_t pick = detail::categorical_log(rng, terms);
  seq.m[0] = pool.at(0, pick);
  for (std::size_t i = 1; i < n; ++i) {
    gamma_row(model, theta, pp, z, pool, i, gamma);
    const double prev_m = seq.m[i - 1];
    const auto beta = lat.row(i);
    const auto m = pool.row(i);
    for (std::size_t l = 0; l < L; ++l)
      terms[l] = model.log_trans(theta, prev_m, m[l]) + gamma[l] + beta[l];
    pick = detail::categorical_log(rng, terms);
    seq.m[i] = m[pick];
  }
  return seq;
}

namespace detail {

std::size_t categorical_log(Rng& rng, std::span<const double> logw) {
  const double lse = kernels::log_sum_exp(logw.data(), logw.size());
  if (!(lse > kNegInf))
    throw std::invalid_argument("categorical_log: no finite weight");
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t l = 0; l < logw.size(); ++l) {
    acc += std::exp(logw[l] - lse);
    if (u < acc) return l;
  }
  for (std::size_t l = logw.size(); l-- > 0;)
    if (logw[l] > kNegInf) return l;
  return logw.size() - 1;
}

}  // namespace detail

}  // namespace ehmm
