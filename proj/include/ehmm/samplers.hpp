#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ehmm/lattice.hpp"
#include "ehmm/model.hpp"
#include "ehmm/pool.hpp"
#include "ehmm/rng.hpp"

namespace ehmm {

enum class SamplerKind { metropolis, single_seq, ensemble, staged };

const char* sampler_name(SamplerKind k);
std::optional<SamplerKind> sampler_from_name(const std::string& s);

// Random-walk proposal: componentwise sd = scaling * base_sd.
struct ProposalConfig {
  std::array<double, 3> base_sd{0.14, 0.36, 0.065};
  double scaling = 1.0;
};

struct Counters {
  double full_passes = 0.0;  // fractional backward/forward passes
  std::uint64_t param_proposals = 0, param_accepts = 0;
  std::uint64_t stage1_proposals = 0, stage1_accepts = 0;
  std::uint64_t stage2_proposals = 0, stage2_accepts = 0;
  std::uint64_t site_proposals = 0, site_accepts = 0;
  std::uint64_t seq_updates = 0;
  // Proposals rejected on prior support before any lattice work. Included
  // in the corresponding proposals counter; tracked separately so pass
  // accounting can exclude them.
  std::uint64_t off_support = 0;
};

struct SamplerConfig {
  std::size_t pool_size = 40;    // L
  ProposalConfig proposal;
  std::size_t updates_per_pool = 10;  // parameter updates per pool / sweep
  std::size_t n1 = 81;           // first-stage start time (1-based)
  PoolParams pool_params;
  double site_scale = 1.0;       // multiplier on baseline site proposal sds
};

struct ChainState {
  ParamVec theta;
  LatentSequence seq;
  std::optional<EnsembleLogDensity> cached_density;
  std::optional<PoolSet> pool;
  Counters counters;
};

// Per-iteration acceptance counts recorded into trace rows. For staged
// iterations acc1/acc2 are the first/second stage accepts; elsewhere acc1
// counts accepted parameter proposals and acc2 accepted site updates.
struct IterStats {
  std::uint32_t acc1 = 0;
  std::uint32_t acc2 = 0;
};

// theta + Normal(0, diag((scaling * base_sd)^2)); symmetric.
ParamVec propose_params(Rng& rng, const ParamVec& theta,
                        const ProposalConfig& pc);

// Single MH step with log acceptance ratio `log_ratio`.
bool mh_accept(Rng& rng, double log_ratio);

// Random-walk Metropolis update of theta conditional on the current
// sequence. Returns whether the proposal was accepted.
bool metropolis_param_update(Rng& rng, const ModelDensities& model,
                             ChainState& state, const ObservedSeries& z,
                             const ProposalConfig& pc);

// One sequential single-site Metropolis pass over the latent sequence with
// the precision-matched proposal widths. Parameter updates are not included.
std::uint32_t metropolis_site_sweep(Rng& rng, const ModelDensities& model,
                                    ChainState& state, const ObservedSeries& z,
                                    const SamplerConfig& cfg);

// Site sweep followed by one parameter update (the baseline sampler's
// iteration).
IterStats baseline_metropolis_iter(Rng& rng, const ModelDensities& model,
                                   ChainState& state, const ObservedSeries& z,
                                   const SamplerConfig& cfg);

// Pool build + forward pass + backward sequence draw, then
// cfg.updates_per_pool Metropolis updates of theta given the new sequence.
IterStats single_sequence_iter(Rng& rng, const ModelDensities& model,
                               ChainState& state, const ObservedSeries& z,
                               const SamplerConfig& cfg);

// Pool build + cached ensemble density, M parameter updates accepted on the
// ensemble density ratio (one forward pass per in-support proposal), then a
// backward sequence draw at the final theta.
IterStats ensemble_iter(Rng& rng, const ModelDensities& model,
                        ChainState& state, const ObservedSeries& z,
                        const SamplerConfig& cfg);

// Staged variant: proposals are screened with a partial backward pass and
// the first-stage density; survivors get the extension to a full pass and
// the second-stage test. Sequence drawn with a stochastic forward pass.
IterStats staged_iter(Rng& rng, const ModelDensities& model, ChainState& state,
                      const ObservedSeries& z, const SamplerConfig& cfg);

// Second-stage log acceptance ratio given full/first-stage log densities at
// the current and proposed points (symmetric proposal terms cancel).
inline double staged_stage2_log_ratio(double cur_full, double cur_stage1,
                                      double prop_full, double prop_stage1) {
  return (prop_full + cur_stage1) - (cur_full + prop_stage1);
}

struct TraceMeta {
  SamplerKind kind = SamplerKind::ensemble;
  std::size_t pool_size = 0;
  double scaling = 0.0;
  std::size_t updates_per_pool = 0;
  std::size_t n1 = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::size_t thin = 1;
  double time_per_iteration_s = 0.0;
  double total_s = 0.0;
  std::string kernel;
  Counters counters;
  bool complete = false;
};

struct ChainTrace {
  std::vector<std::uint64_t> iteration;  // 1-based iteration index per row
  std::vector<ParamVec> samples;
  std::vector<IterStats> flags;
  TraceMeta meta;

  std::size_t size() const { return samples.size(); }
};

// Initial chain state: theta0 as given, latent states drawn independently
// from the pool distributions at each time.
ChainState initial_state(const ParamVec& theta0, const PoolParams& pp,
                         const ObservedSeries& z, Rng& rng);

// Runs `iterations` iterations of the requested sampler, recording theta
// every `thin` iterations.
ChainTrace run_chain(SamplerKind kind, const ModelDensities& model,
                     ChainState state, const ObservedSeries& z,
                     const SamplerConfig& cfg, std::size_t iterations,
                     std::size_t thin, Rng& rng);

}  // namespace ehmm
