#include "ehmm/ricker.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

inline double normal_logpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kHalfLog2Pi;
}

}  // namespace

double joint_log_density(const ModelDensities& model, const ParamVec& theta,
                         const LatentSequence& x, const ObservedSeries& z) {
  if (x.size() != z.size())
    throw std::invalid_argument("joint_log_density: length mismatch");
  const double prior = model.log_prior(theta);
  if (prior == kNegInf) return kNegInf;
  double total = prior + model.log_init(theta, x.m[0]);
  for (std::size_t i = 1; i < x.size(); ++i)
    total += model.log_trans(theta, x.m[i - 1], x.m[i]);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z.observed(i)) total += model.log_emit(theta, z.count(i), x.m[i]);
  return total;
}

double RickerModel::log_init(const ParamVec& theta, double m) const {
  return normal_logpdf(m, theta.log_r + theta.log_phi - 1.0, theta.sigma());
}

double RickerModel::log_trans(const ParamVec& theta, double m_prev,
                              double m) const {
  return normal_logpdf(m, transition_mean(theta, m_prev), theta.sigma());
}

double RickerModel::log_emit(const ParamVec&, std::int64_t y, double m) const {
  // Poisson(exp(m)) log-pmf: y*m - exp(m) - log(y!)
  return static_cast<double>(y) * m - std::exp(m) -
         std::lgamma(static_cast<double>(y) + 1.0);
}

bool RickerModel::in_support(const ParamVec& theta) const {
  const double log01 = std::log(0.1);
  return theta.log_r > 0.0 && theta.log_r < 10.0 &&
         theta.log_sigma >= log01 && theta.log_sigma <= 0.0 &&
         theta.phi() > 0.0 && theta.phi() < 100.0;
}

double RickerModel::log_prior(const ParamVec& theta) const {
  if (!in_support(theta)) return kNegInf;
  // Uniform(0,10) on log r, Uniform[log 0.1, 0] on log sigma, Uniform(0,100)
  // on phi. The state carries log phi, hence the exp(log_phi) Jacobian.
  const double log10 = std::log(10.0);
  return theta.log_phi - log10 - std::log(log10) - std::log(100.0);
}

std::optional<ModelDensities::GaussianTransition>
RickerModel::gaussian_transition(const ParamVec& theta) const {
  const double sd = theta.sigma();
  return GaussianTransition{1.0 / sd, -std::log(sd) - kHalfLog2Pi};
}

double RickerModel::transition_mean(const ParamVec& theta,
                                    double m_prev) const {
  return theta.log_r + m_prev - std::exp(m_prev) / theta.phi();
}

ParamVec RickerModel::prior_mean() {
  return {5.0, 0.5 * std::log(0.1), std::log(50.0)};
}

RickerModel::Simulation RickerModel::simulate(const ParamVec& theta,
                                              std::size_t n,
                                              std::size_t obs_start,
                                              Rng& rng) const {
  if (n < 1) throw std::invalid_argument("simulate: n >= 1 required");
  if (obs_start < 1 || obs_start > n)
    throw std::invalid_argument("simulate: obs_start out of range");
  const double sd = theta.sigma();
  Simulation sim;
  sim.latent.m.resize(n);
  sim.obs.y.resize(n);
  sim.obs.obs_start = obs_start;
  double m = theta.log_r + theta.log_phi - 1.0 + sd * rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) m = transition_mean(theta, m) + sd * rng.normal();
    sim.latent.m[i] = m;
    if (i + 1 >= obs_start) sim.obs.y[i] = rng.poisson(std::exp(m));
  }
  return sim;
}

}  // namespace ehmm
