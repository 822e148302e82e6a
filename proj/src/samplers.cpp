#include "ehmm/samplers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ehmm/kernels.hpp"

namespace ehmm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

const char* sampler_name(SamplerKind k) {
  switch (k) {
    case SamplerKind::metropolis: return "metropolis";
    case SamplerKind::single_seq: return "single-seq";
    case SamplerKind::ensemble: return "ensemble";
    case SamplerKind::staged: return "staged";
  }
  return "?";
}

std::optional<SamplerKind> sampler_from_name(const std::string& s) {
  if (s == "metropolis") return SamplerKind::metropolis;
  if (s == "single-seq") return SamplerKind::single_seq;
  if (s == "ensemble") return SamplerKind::ensemble;
  if (s == "staged") return SamplerKind::staged;
  return std::nullopt;
}

ParamVec propose_params(Rng& rng, const ParamVec& theta,
                        const ProposalConfig& pc) {
  auto a = theta.as_array();
  for (std::size_t i = 0; i < 3; ++i)
    a[i] += pc.scaling * pc.base_sd[i] * rng.normal();
  return ParamVec::from_array(a);
}

bool mh_accept(Rng& rng, double log_ratio) {
  if (!(log_ratio > kNegInf)) return false;
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform_pos()) < log_ratio;
}

bool metropolis_param_update(Rng& rng, const ModelDensities& model,
                             ChainState& state, const ObservedSeries& z,
                             const ProposalConfig& pc) {
  const ParamVec prop = propose_params(rng, state.theta, pc);
  ++state.counters.param_proposals;
  if (model.log_prior(prop) == kNegInf) {
    ++state.counters.off_support;
    return false;
  }
  const double cur = joint_log_density(model, state.theta, state.seq, z);
  const double next = joint_log_density(model, prop, state.seq, z);
  if (mh_accept(rng, next - cur)) {
    state.theta = prop;
    ++state.counters.param_accepts;
    return true;
  }
  return false;
}

std::uint32_t metropolis_site_sweep(Rng& rng, const ModelDensities& model,
                                    ChainState& state, const ObservedSeries& z,
                                    const SamplerConfig& cfg) {
  const std::size_t n = state.seq.size();
  auto& m = state.seq.m;
  const ParamVec& theta = state.theta;
  const double sigma = theta.sigma();

  auto local = [&](std::size_t i, double mi) {
    double v = (i == 0) ? model.log_init(theta, mi)
                        : model.log_trans(theta, m[i - 1], mi);
    if (i + 1 < n) v += model.log_trans(theta, mi, m[i + 1]);
    if (z.observed(i)) v += model.log_emit(theta, z.count(i), mi);
    return v;
  };

  std::uint32_t accepted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Precision-matched width: 1/sd^2 estimates combine the transition
    // precision 1/sigma^2 with the observation precision y_i.
    const bool informative = z.observed(i) && z.count(i) > 0;
    const double sd =
        cfg.site_scale *
        (informative
             ? 1.0 / std::sqrt(1.0 / (sigma * sigma) +
                               static_cast<double>(z.count(i)))
             : 0.5 * sigma);
    const double prop = m[i] + sd * rng.normal();
    ++state.counters.site_proposals;
    if (mh_accept(rng, local(i, prop) - local(i, m[i]))) {
      m[i] = prop;
      ++state.counters.site_accepts;
      ++accepted;
    }
  }
  ++state.counters.seq_updates;
  return accepted;
}

IterStats baseline_metropolis_iter(Rng& rng, const ModelDensities& model,
                                   ChainState& state, const ObservedSeries& z,
                                   const SamplerConfig& cfg) {
  IterStats s;
  s.acc2 = metropolis_site_sweep(rng, model, state, z, cfg);
  s.acc1 = metropolis_param_update(rng, model, state, z, cfg.proposal) ? 1 : 0;
  return s;
}

IterStats single_sequence_iter(Rng& rng, const ModelDensities& model,
                               ChainState& state, const ObservedSeries& z,
                               const SamplerConfig& cfg) {
  IterStats s;
  const PoolSet pool =
      build_poolset(cfg.pool_params, state.seq, z, cfg.pool_size, rng);
  const LogLattice fwd = forward(model, state.theta, pool, z, cfg.pool_params);
  state.seq = sample_sequence_backward(rng, model, state.theta, fwd, pool);
  state.counters.full_passes += 1.0;
  ++state.counters.seq_updates;
  for (std::size_t j = 0; j < cfg.updates_per_pool; ++j)
    if (metropolis_param_update(rng, model, state, z, cfg.proposal)) ++s.acc1;
  return s;
}

IterStats ensemble_iter(Rng& rng, const ModelDensities& model,
                        ChainState& state, const ObservedSeries& z,
                        const SamplerConfig& cfg) {
  IterStats s;
  state.pool = build_poolset(cfg.pool_params, state.seq, z, cfg.pool_size, rng);
  const PoolSet& pool = *state.pool;

  LogLattice fwd = forward(model, state.theta, pool, z, cfg.pool_params);
  state.counters.full_passes += 1.0;
  state.cached_density = ensemble_log_density(model, state.theta, fwd);

  for (std::size_t j = 0; j < cfg.updates_per_pool; ++j) {
    const ParamVec prop = propose_params(rng, state.theta, cfg.proposal);
    ++state.counters.param_proposals;
    if (model.log_prior(prop) == kNegInf) {
      ++state.counters.off_support;
      continue;
    }
    LogLattice fwd_prop = forward(model, prop, pool, z, cfg.pool_params);
    state.counters.full_passes += 1.0;
    const EnsembleLogDensity cand = ensemble_log_density(model, prop, fwd_prop);
    if (mh_accept(rng, cand.value - state.cached_density->value)) {
      state.theta = prop;
      state.cached_density = cand;
      fwd = std::move(fwd_prop);
      ++state.counters.param_accepts;
      ++s.acc1;
    }
  }

  state.seq = sample_sequence_backward(rng, model, state.theta, fwd, pool);
  ++state.counters.seq_updates;
  state.pool.reset();
  state.cached_density.reset();
  return s;
}

IterStats staged_iter(Rng& rng, const ModelDensities& model, ChainState& state,
                      const ObservedSeries& z, const SamplerConfig& cfg) {
  IterStats s;
  const std::size_t n = z.size();
  if (cfg.n1 < 1 || cfg.n1 > n)
    throw std::invalid_argument("staged_iter: n1 out of range");
  const std::size_t stage_row = cfg.n1 - 1;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const double partial_frac = static_cast<double>(n - cfg.n1) / denom;
  const double extend_frac = static_cast<double>(cfg.n1 - 1) / denom;

  state.pool = build_poolset(cfg.pool_params, state.seq, z, cfg.pool_size, rng);
  const PoolSet& pool = *state.pool;

  LogLattice lat =
      backward_partial(model, state.theta, pool, z, cfg.pool_params, 0);
  state.counters.full_passes += 1.0;
  EnsembleLogDensity cur_full =
      full_log_density_backward(model, state.theta, lat, pool, z,
                                cfg.pool_params);
  EnsembleLogDensity cur_stage1 =
      first_stage_log_density(model, state.theta, lat, pool, z, stage_row);
  state.cached_density = cur_full;

  for (std::size_t j = 0; j < cfg.updates_per_pool; ++j) {
    const ParamVec prop = propose_params(rng, state.theta, cfg.proposal);
    ++state.counters.stage1_proposals;
    if (model.log_prior(prop) == kNegInf) {
      ++state.counters.off_support;
      continue;
    }
    LogLattice lat_prop =
        backward_partial(model, prop, pool, z, cfg.pool_params, stage_row);
    state.counters.full_passes += partial_frac;
    const EnsembleLogDensity prop_stage1 =
        first_stage_log_density(model, prop, lat_prop, pool, z, stage_row);
    if (!mh_accept(rng, prop_stage1.value - cur_stage1.value)) continue;
    ++state.counters.stage1_accepts;
    ++s.acc1;

    extend_backward(model, prop, lat_prop, pool, z, cfg.pool_params);
    state.counters.full_passes += extend_frac;
    const EnsembleLogDensity prop_full =
        full_log_density_backward(model, prop, lat_prop, pool, z,
                                  cfg.pool_params);
    ++state.counters.stage2_proposals;
    const double log_ratio = staged_stage2_log_ratio(
        cur_full.value, cur_stage1.value, prop_full.value, prop_stage1.value);
    if (mh_accept(rng, log_ratio)) {
      state.theta = prop;
      lat = std::move(lat_prop);
      cur_full = prop_full;
      cur_stage1 = prop_stage1;
      state.cached_density = cur_full;
      ++state.counters.stage2_accepts;
      ++s.acc2;
    }
  }

  state.seq = sample_sequence_forward(rng, model, state.theta, lat, pool, z,
                                      cfg.pool_params);
  ++state.counters.seq_updates;
  state.pool.reset();
  state.cached_density.reset();
  return s;
}

ChainState initial_state(const ParamVec& theta0, const PoolParams& pp,
                         const ObservedSeries& z, Rng& rng) {
  ChainState state;
  state.theta = theta0;
  state.seq.m.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    state.seq.m[i] = sample_pool_state(pp, z.y[i], rng);
  return state;
}

ChainTrace run_chain(SamplerKind kind, const ModelDensities& model,
                     ChainState state, const ObservedSeries& z,
                     const SamplerConfig& cfg, std::size_t iterations,
                     std::size_t thin, Rng& rng) {
  if (thin < 1) throw std::invalid_argument("run_chain: thin >= 1 required");
  ChainTrace trace;
  trace.meta.kind = kind;
  trace.meta.pool_size = cfg.pool_size;
  trace.meta.scaling = cfg.proposal.scaling;
  trace.meta.updates_per_pool = cfg.updates_per_pool;
  trace.meta.n1 = cfg.n1;
  trace.meta.iterations = iterations;
  trace.meta.thin = thin;
  trace.meta.kernel = kernels::name(kernels::active());
  trace.samples.reserve(iterations / thin);

  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t it = 1; it <= iterations; ++it) {
    IterStats s;
    switch (kind) {
      case SamplerKind::metropolis:
        s = baseline_metropolis_iter(rng, model, state, z, cfg);
        break;
      case SamplerKind::single_seq:
        s = single_sequence_iter(rng, model, state, z, cfg);
        break;
      case SamplerKind::ensemble:
        s = ensemble_iter(rng, model, state, z, cfg);
        break;
      case SamplerKind::staged:
        s = staged_iter(rng, model, state, z, cfg);
        break;
    }
    if (it % thin == 0) {
      trace.iteration.push_back(it);
      trace.samples.push_back(state.theta);
      trace.flags.push_back(s);
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  trace.meta.total_s = std::chrono::duration<double>(t1 - t0).count();
  trace.meta.time_per_iteration_s =
      iterations > 0 ? trace.meta.total_s / static_cast<double>(iterations)
                     : 0.0;
  trace.meta.counters = state.counters;
  trace.meta.complete = true;
  return trace;
}

}  // namespace ehmm
