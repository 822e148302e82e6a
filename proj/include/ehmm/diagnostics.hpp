#pragma once

#include <array>
#include <string>
#include <vector>

#include "ehmm/samplers.hpp"

namespace ehmm {

// Drops the leading floor(frac * n) samples.
std::vector<double> trim_burn_in(const std::vector<double>& x, double frac);

// Scalar series per run for one parameter. natural_scale applies exp().
std::vector<std::vector<double>> parameter_series(
    const std::vector<ChainTrace>& traces, std::size_t param,
    bool natural_scale, double burn_in_frac);

// Lag-k autocovariance pooled across runs: per-run 1/n sums around the
// grand mean, averaged over runs. Runs must be the same length; lag must be
// smaller than that length.
double pooled_autocovariance(const std::vector<std::vector<double>>& runs,
                             std::size_t lag);

struct ActOptions {
  double rho_threshold = 0.01;  // "nearly zero" cutoff
  std::size_t consecutive = 2;  // required consecutive small lags
  std::size_t cap_divisor = 50; // max lag = n / cap_divisor
};

struct ActEstimate {
  double tau = 1.0;
  std::size_t truncation_lag = 0;
  bool below_one = false;   // negative autocorrelation; reported as-is
  bool degenerate = false;  // zero-variance input
};

// tau = 1 + 2 * sum_{k=1..K} rho_k with K the last lag before the first
// run of `consecutive` lags with rho below the threshold.
ActEstimate act(const std::vector<std::vector<double>>& runs,
                const ActOptions& opt = {});

struct PosteriorSummary {
  std::array<double, 3> mean{};  // natural scales (r, sigma, phi)
  std::array<double, 3> se{};    // sd of per-run means / sqrt(#runs)
};

PosteriorSummary posterior_summary(const std::vector<ChainTrace>& traces,
                                   double burn_in_frac);

struct EfficiencyRow {
  std::string sampler;
  std::size_t pool_size = 0;
  double scaling = 0.0;
  std::size_t updates_per_pool = 0;
  std::size_t n1 = 0;
  std::size_t iterations = 0;
  std::size_t chains = 0;
  double time_per_iter = 0.0;
  double acc1 = 0.0;  // acceptance rates in [0, 1]
  double acc2 = 0.0;
  std::array<double, 3> act{};       // log-scale traces
  std::array<double, 3> act_nat{};   // natural-scale traces
  std::array<std::size_t, 3> lag{};
  PosteriorSummary summary;

  std::array<double, 3> act_time() const {
    return {act[0] * time_per_iter, act[1] * time_per_iter,
            act[2] * time_per_iter};
  }
};

// Builds one efficiency row from the traces of a single setting.
EfficiencyRow efficiency_row(const std::vector<ChainTrace>& traces,
                             double burn_in_frac,
                             const ActOptions& opt = {});

// CSV (with header) and aligned-text renderings. Rows must have
// time_per_iter > 0.
std::string efficiency_csv(const std::vector<EfficiencyRow>& rows);
std::string efficiency_text(const std::vector<EfficiencyRow>& rows);

}  // namespace ehmm
