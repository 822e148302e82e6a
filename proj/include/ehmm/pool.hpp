#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ehmm/model.hpp"
#include "ehmm/rng.hpp"

namespace ehmm {

// Pseudo-prior for the Poisson mean exp(m): Gamma(k, theta). At observed
// times the pool draws come from the conjugate update
// Gamma(k + y, theta / (1 + theta)) instead.
struct PoolParams {
  double k = 0.15;
  double theta = 50.0;
};

// Per-time pools of candidate latent states, row-major n x L. Slot 0 at
// every time holds the embedding sequence's value; slots 1..L-1 are
// independent draws from the pool density. Pool construction never sees the
// model parameters (required for ensemble-update reversibility).
struct PoolSet {
  std::size_t n = 0;
  std::size_t L = 0;
  std::vector<double> m;

  double at(std::size_t i, std::size_t l) const { return m[i * L + l]; }
  std::span<const double> row(std::size_t i) const {
    return {m.data() + i * L, L};
  }
  std::span<double> row(std::size_t i) { return {m.data() + i * L, L}; }
};

// Log pool density of m (state space, i.e. after the exp(m) change of
// variables). With an observed count y the conjugate-posterior variant is
// evaluated instead.
double log_kappa(const PoolParams& pp, double m,
                 std::optional<std::int64_t> y = std::nullopt);

// Draws `count` pool states (log scale) for one time point.
std::vector<double> sample_pool_states(const PoolParams& pp,
                                       std::optional<std::int64_t> y,
                                       std::size_t count, Rng& rng);

// Single draw, avoiding the vector round trip.
double sample_pool_state(const PoolParams& pp, std::optional<std::int64_t> y,
                         Rng& rng);

// Builds the n x L pool around `current`, conditioning each time's draws on
// its observation (if any).
PoolSet build_poolset(const PoolParams& pp, const LatentSequence& current,
                      const ObservedSeries& z, std::size_t L, Rng& rng);

namespace detail {
// Effective Gamma parameters and log normalizing constant for one time
// point; shared between log_kappa and the lattice row loops.
struct KappaTerms {
  double shape;
  double inv_scale;
  double log_norm;  // lgamma(shape) + shape * log(scale)
};
KappaTerms kappa_terms(const PoolParams& pp, std::optional<std::int64_t> y);

inline double log_kappa_with(const KappaTerms& t, double m) {
  return t.shape * m - std::exp(m) * t.inv_scale - t.log_norm;
}
}  // namespace detail

}  // namespace ehmm
