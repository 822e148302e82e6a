#include "ehmm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ehmm {

using nlohmann::json;

SamplerKind RunConfig::kind() const {
  const auto k = sampler_from_name(sampler);
  if (!k) throw ValidationError("unknown sampler: " + sampler);
  return *k;
}

SamplerConfig RunConfig::sampler_config() const {
  SamplerConfig cfg;
  cfg.pool_size = pool_size;
  cfg.proposal.scaling = scaling;
  cfg.updates_per_pool = updates_per_pool;
  cfg.n1 = n1;
  cfg.pool_params = {pool_k, pool_theta};
  cfg.site_scale = site_scale;
  return cfg;
}

void RunConfig::resolve_seeds() {
  if (seeds.empty()) {
    seeds.reserve(chains);
    for (std::size_t c = 0; c < chains; ++c)
      seeds.push_back(Rng::mix_seed(seed, c));
  }
}

void RunConfig::validate() const {
  if (!sampler_from_name(sampler))
    throw ValidationError("unknown sampler: " + sampler);
  if (!(true_r > 0) || !(true_sigma > 0) || !(true_phi > 0))
    throw ValidationError("model parameters must be positive");
  if (n < 1) throw ValidationError("n must be >= 1");
  if (obs_start < 1 || obs_start > n)
    throw ValidationError("obs_start must be in [1, n]");
  if (pool_size < 1) throw ValidationError("pool_size must be >= 1");
  if (!(scaling > 0)) throw ValidationError("scaling must be positive");
  if (n1 < 1 || n1 > n) throw ValidationError("n1 must be in [1, n]");
  if (chains < 1) throw ValidationError("chains must be >= 1");
  if (!seeds.empty()) {
    if (seeds.size() != chains)
      throw ValidationError("seeds must match the chain count");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size())
      throw ValidationError("per-chain seeds must be distinct");
  }
  if (!(pool_k > 0) || !(pool_theta > 0))
    throw ValidationError("pool parameters must be positive");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  if (!(burn_in >= 0.0) || burn_in >= 1.0)
    throw ValidationError("burn_in must be in [0, 1)");
  if (!(site_scale > 0)) throw ValidationError("site_scale must be positive");
}

RunConfig RunConfig::defaults_for(const std::string& sampler) {
  RunConfig c;
  c.sampler = sampler;
  const auto k = sampler_from_name(sampler);
  if (!k) throw ValidationError("unknown sampler: " + sampler);
  switch (*k) {
    case SamplerKind::metropolis:
      c.pool_size = 1;
      c.scaling = 0.25;
      c.updates_per_pool = 1;
      c.thin = 1;
      break;
    case SamplerKind::single_seq:
      c.pool_size = 40;
      c.scaling = 0.25;
      c.updates_per_pool = 10;
      c.thin = 10;
      break;
    case SamplerKind::ensemble:
      c.pool_size = 120;
      c.scaling = 1.4;
      c.updates_per_pool = 5;
      c.thin = 1;
      break;
    case SamplerKind::staged:
      c.pool_size = 120;
      c.scaling = 1.8;
      c.updates_per_pool = 10;
      c.thin = 1;
      break;
  }
  return c;
}

namespace {

json to_json(const RunConfig& c) {
  return json{{"sampler", c.sampler},
              {"true_r", c.true_r},
              {"true_sigma", c.true_sigma},
              {"true_phi", c.true_phi},
              {"n", c.n},
              {"obs_start", c.obs_start},
              {"pool_size", c.pool_size},
              {"scaling", c.scaling},
              {"updates_per_pool", c.updates_per_pool},
              {"n1", c.n1},
              {"iterations", c.iterations},
              {"chains", c.chains},
              {"seed", c.seed},
              {"seeds", c.seeds},
              {"pool_k", c.pool_k},
              {"pool_theta", c.pool_theta},
              {"thin", c.thin},
              {"burn_in", c.burn_in},
              {"out_dir", c.out_dir},
              {"workers", c.workers},
              {"site_scale", c.site_scale}};
}

void merge_from_json(RunConfig& c, const json& j) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("true_r", c.true_r);
  get("true_sigma", c.true_sigma);
  get("true_phi", c.true_phi);
  get("n", c.n);
  get("obs_start", c.obs_start);
  get("pool_size", c.pool_size);
  get("scaling", c.scaling);
  get("updates_per_pool", c.updates_per_pool);
  get("n1", c.n1);
  get("iterations", c.iterations);
  get("chains", c.chains);
  get("seed", c.seed);
  get("seeds", c.seeds);
  get("pool_k", c.pool_k);
  get("pool_theta", c.pool_theta);
  get("thin", c.thin);
  get("burn_in", c.burn_in);
  get("out_dir", c.out_dir);
  get("workers", c.workers);
  get("site_scale", c.site_scale);
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  return to_json(c).dump(2);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  std::string sampler = "ensemble";
  if (j.contains("sampler")) j.at("sampler").get_to(sampler);
  RunConfig c = RunConfig::defaults_for(sampler);
  try {
    merge_from_json(c, j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field error: ") + e.what());
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ehmm
