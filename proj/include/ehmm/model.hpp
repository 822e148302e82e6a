#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ehmm/params.hpp"

namespace ehmm {

// One latent trajectory; m[i] is the log-scale state at time i (0-based).
struct LatentSequence {
  std::vector<double> m;

  std::size_t size() const { return m.size(); }
};

// Observed counts. y[i] is empty at unobserved times. Series produced by the
// simulator are observed from obs_start (1-based) onward; tests may build
// arbitrary observation masks directly.
struct ObservedSeries {
  std::vector<std::optional<std::int64_t>> y;
  std::size_t obs_start = 1;

  std::size_t size() const { return y.size(); }
  bool observed(std::size_t i) const { return y[i].has_value(); }
  std::int64_t count(std::size_t i) const { return *y[i]; }

  // Suffix-observed series: counts[j] is the observation at time
  // obs_start + j (1-based times).
  static ObservedSeries suffix(std::size_t n, std::size_t obs_start,
                               const std::vector<std::int64_t>& counts) {
    if (obs_start < 1 || obs_start > n)
      throw std::invalid_argument("obs_start out of range");
    if (counts.size() != n - obs_start + 1)
      throw std::invalid_argument("observation count mismatch");
    ObservedSeries z;
    z.obs_start = obs_start;
    z.y.resize(n);
    for (std::size_t j = 0; j < counts.size(); ++j)
      z.y[obs_start - 1 + j] = counts[j];
    return z;
  }
};

// Log-densities defining a state space model. Each returns a real value or
// -inf. The Gaussian-transition hooks expose the shared-width structure of
// models whose transition is Normal(mean(m_prev), sd(theta)); the lattice
// recursions use them to run the fused SIMD kernels, and fall back to
// per-element log_trans calls otherwise.
class ModelDensities {
 public:
  virtual ~ModelDensities() = default;

  virtual double log_init(const ParamVec& theta, double m) const = 0;
  virtual double log_trans(const ParamVec& theta, double m_prev,
                           double m) const = 0;
  virtual double log_emit(const ParamVec& theta, std::int64_t y,
                          double m) const = 0;
  virtual double log_prior(const ParamVec& theta) const = 0;

  struct GaussianTransition {
    double inv_sd;
    double log_norm;  // -log(sd * sqrt(2*pi))
  };
  virtual std::optional<GaussianTransition> gaussian_transition(
      const ParamVec&) const {
    return std::nullopt;
  }
  // Only meaningful when gaussian_transition() is engaged.
  virtual double transition_mean(const ParamVec&, double /*m_prev*/) const {
    throw std::logic_error("transition_mean: no Gaussian transition");
  }
};

// Unnormalized log posterior of (theta, x) given z:
// log prior + log init + sum of transitions + emissions at observed times.
// Returns -inf if theta is outside the prior support.
double joint_log_density(const ModelDensities& model, const ParamVec& theta,
                         const LatentSequence& x, const ObservedSeries& z);

}  // namespace ehmm
