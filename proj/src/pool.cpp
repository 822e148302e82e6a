#include "ehmm/pool.hpp"

#include <cmath>
#include <stdexcept>

namespace ehmm {

namespace detail {

KappaTerms kappa_terms(const PoolParams& pp, std::optional<std::int64_t> y) {
  if (!(pp.k > 0.0) || !(pp.theta > 0.0))
    throw std::invalid_argument("pool parameters must be positive");
  double shape = pp.k;
  double scale = pp.theta;
  if (y) {
    shape += static_cast<double>(*y);
    scale = pp.theta / (1.0 + pp.theta);
  }
  return {shape, 1.0 / scale,
          std::lgamma(shape) + shape * std::log(scale)};
}

}  // namespace detail

double log_kappa(const PoolParams& pp, double m,
                 std::optional<std::int64_t> y) {
  return detail::log_kappa_with(detail::kappa_terms(pp, y), m);
}

double sample_pool_state(const PoolParams& pp, std::optional<std::int64_t> y,
                         Rng& rng) {
  const auto t = detail::kappa_terms(pp, y);
  return rng.log_gamma_draw(t.shape, 1.0 / t.inv_scale);
}

std::vector<double> sample_pool_states(const PoolParams& pp,
                                       std::optional<std::int64_t> y,
                                       std::size_t count, Rng& rng) {
  const auto t = detail::kappa_terms(pp, y);
  std::vector<double> out(count);
  for (auto& v : out) v = rng.log_gamma_draw(t.shape, 1.0 / t.inv_scale);
  return out;
}

PoolSet build_poolset(const PoolParams& pp, const LatentSequence& current,
                      const ObservedSeries& z, std::size_t L, Rng& rng) {
  if (L < 1) throw std::invalid_argument("pool size must be >= 1");
  if (current.size() != z.size())
    throw std::invalid_argument("build_poolset: length mismatch");
  PoolSet pool;
  pool.n = current.size();
  pool.L = L;
  pool.m.resize(pool.n * L);
  for (std::size_t i = 0; i < pool.n; ++i) {
    auto row = pool.row(i);
    row[0] = current.m[i];
    const auto t = detail::kappa_terms(pp, z.y[i]);
    const double scale = 1.0 / t.inv_scale;
    for (std::size_t l = 1; l < L; ++l)
      row[l] = rng.log_gamma_draw(t.shape, scale);
  }
  return pool;
}

}  // namespace ehmm
