#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehmm/samplers.hpp"

namespace ehmm {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment's settings. Field precedence when assembling a config:
// command-line flags > config file > sampler-specific defaults.
struct RunConfig {
  std::string sampler = "ensemble";
  double true_r = 44.701184493300815;  // exp(3.8)
  double true_sigma = 0.15;
  double true_phi = 2.0;
  std::size_t n = 100;
  std::size_t obs_start = 51;
  std::size_t pool_size = 120;
  double scaling = 1.4;
  std::size_t updates_per_pool = 5;
  std::size_t n1 = 81;
  std::size_t iterations = 20000;
  std::size_t chains = 5;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  // resolved per-chain seeds
  double pool_k = 0.15;
  double pool_theta = 50.0;
  std::size_t thin = 1;
  double burn_in = 0.10;
  std::string out_dir = "out";
  std::size_t workers = 0;  // 0 = hardware concurrency
  double site_scale = 1.0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  SamplerKind kind() const;
  ParamVec theta_true() const {
    return ParamVec::from_natural(true_r, true_sigma, true_phi);
  }
  SamplerConfig sampler_config() const;

  // Fills seeds (when empty) with `chains` distinct streams derived from
  // `seed`.
  void resolve_seeds();

  // Throws ValidationError on out-of-range fields or duplicate seeds.
  void validate() const;

  // Baseline defaults per sampler (pool size, scaling, update count, thin).
  static RunConfig defaults_for(const std::string& sampler);
};

// JSON round trip: parse(serialize(c)) == c for valid configs.
std::string serialize_config(const RunConfig& c);
RunConfig parse_config(const std::string& json_text);

// Reads a config file and layers it over the sampler defaults: the file may
// omit any field. The sampler is taken from the file when present.
RunConfig load_config_file(const std::string& path);

}  // namespace ehmm
