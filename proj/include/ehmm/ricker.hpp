#pragma once

#include "ehmm/model.hpp"
#include "ehmm/rng.hpp"

namespace ehmm {

// Ricker population dynamics in its log-transformed parameterization.
// The population N_i evolves as N_{i+1} = r * N_i * exp(-N_i + e_i) with
// N_0 = 1 and e_i ~ Normal(0, sigma^2); the state variable is
// m_i = log(phi * N_i) and counts are Poisson(exp(m_i)).
//
// In m-space:
//   m_1   ~ Normal(log r + log phi - 1, sigma^2)
//   m_i   ~ Normal(log r + m_{i-1} - exp(m_{i-1}) / phi, sigma^2)
//   y_i   ~ Poisson(exp(m_i))
//
// Priors: log r ~ Uniform(0, 10), log sigma ~ Uniform[log 0.1, 0],
// phi ~ Uniform(0, 100). The chain state holds log phi, so the prior
// density in log-phi space carries the exp(log_phi) Jacobian factor.
class RickerModel final : public ModelDensities {
 public:
  double log_init(const ParamVec& theta, double m) const override;
  double log_trans(const ParamVec& theta, double m_prev,
                   double m) const override;
  double log_emit(const ParamVec& theta, std::int64_t y,
                  double m) const override;
  double log_prior(const ParamVec& theta) const override;

  std::optional<GaussianTransition> gaussian_transition(
      const ParamVec& theta) const override;
  double transition_mean(const ParamVec& theta, double m_prev) const override;

  bool in_support(const ParamVec& theta) const;

  // Componentwise prior means on the scales the priors are stated on:
  // (log r, log sigma) midpoints, phi midpoint mapped to log phi.
  static ParamVec prior_mean();

  struct Simulation {
    LatentSequence latent;
    ObservedSeries obs;
  };
  // Simulates n steps, observing counts from obs_start (1-based) onward.
  Simulation simulate(const ParamVec& theta, std::size_t n,
                      std::size_t obs_start, Rng& rng) const;
};

}  // namespace ehmm
