#pragma once

#include "ehmm/model.hpp"
#include "ehmm/pool.hpp"
#include "ehmm/rng.hpp"

namespace ehmm {

enum class LatticeKind { forward, backward };

// N x L matrix of log forward (alpha) or log backward (beta) quantities.
// Rows below low_row are unspecified; forward lattices always have
// low_row == 0. All indices are 0-based.
struct LogLattice {
  LatticeKind kind = LatticeKind::forward;
  std::size_t n = 0;
  std::size_t L = 0;
  std::size_t low_row = 0;
  std::vector<double> vals;

  double at(std::size_t i, std::size_t l) const { return vals[i * L + l]; }
  std::span<const double> row(std::size_t i) const {
    return {vals.data() + i * L, L};
  }
  std::span<double> row(std::size_t i) { return {vals.data() + i * L, L}; }
};

// Ensemble log density (prior term included) together with the parameter
// point it was computed at.
struct EnsembleLogDensity {
  double value = 0.0;
  ParamVec theta;
};

// log gamma(z_i | m) = [log emission if time i is observed] - log kappa_i(m).
// The 1/kappa importance correction applies at every time; the emission
// factor only where data exists.
double log_gamma_factor(const ModelDensities& model, const ParamVec& theta,
                        const PoolParams& pp, const ObservedSeries& z,
                        std::size_t i, double m);

// Forward recursion over the pool. Row 0 holds log p(x_1) + log gamma_1;
// each later row folds the L predecessor terms through log-sum-exp.
// Cost is Theta(n * L^2).
LogLattice forward(const ModelDensities& model, const ParamVec& theta,
                   const PoolSet& pool, const ObservedSeries& z,
                   const PoolParams& pp);

// Prior-weighted sum over the final forward row. -inf off prior support.
EnsembleLogDensity ensemble_log_density(const ModelDensities& model,
                                        const ParamVec& theta,
                                        const LogLattice& fwd);

// Backward recursion from row n-1 (all log 1) down to low_row inclusive.
LogLattice backward_partial(const ModelDensities& model, const ParamVec& theta,
                            const PoolSet& pool, const ObservedSeries& z,
                            const PoolParams& pp, std::size_t low_row);

// Continues a partial backward lattice down to row 0 without touching
// populated rows; the result is bit-identical to backward_partial(..., 0).
void extend_backward(const ModelDensities& model, const ParamVec& theta,
                     LogLattice& lat, const PoolSet& pool,
                     const ObservedSeries& z, const PoolParams& pp);

// First-stage ensemble density at stage_row: the unknown p(x_{n1}) is
// replaced by the uniform weight 1/L over pool states; the emission factor
// enters only when stage_row is observed.
EnsembleLogDensity first_stage_log_density(const ModelDensities& model,
                                           const ParamVec& theta,
                                           const LogLattice& lat,
                                           const PoolSet& pool,
                                           const ObservedSeries& z,
                                           std::size_t stage_row);

// Full-sequence ensemble density from a backward lattice populated to row 0.
// Agrees with ensemble_log_density(forward(...)) up to rounding.
EnsembleLogDensity full_log_density_backward(const ModelDensities& model,
                                             const ParamVec& theta,
                                             const LogLattice& lat,
                                             const PoolSet& pool,
                                             const ObservedSeries& z,
                                             const PoolParams& pp);

// Stochastic backward pass over a forward lattice: samples x_N from the
// final row, then x_i proportional to p(x_{i+1} | x_i) alpha_i(x_i).
LatentSequence sample_sequence_backward(Rng& rng, const ModelDensities& model,
                                        const ParamVec& theta,
                                        const LogLattice& fwd,
                                        const PoolSet& pool);

// Stochastic forward pass over a backward lattice populated to row 0; the
// sampled sequence has the same law as sample_sequence_backward's.
LatentSequence sample_sequence_forward(Rng& rng, const ModelDensities& model,
                                       const ParamVec& theta,
                                       const LogLattice& lat,
                                       const PoolSet& pool,
                                       const ObservedSeries& z,
                                       const PoolParams& pp);

namespace detail {
// Inverse-CDF categorical draw over log weights, index order, one uniform.
std::size_t categorical_log(Rng& rng, std::span<const double> logw);
}  // namespace detail

}  // namespace ehmm
