#include "ehmm/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ehmm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json counters_to_json(const Counters& c) {
  return json{{"full_passes", c.full_passes},
              {"param_proposals", c.param_proposals},
              {"param_accepts", c.param_accepts},
              {"stage1_proposals", c.stage1_proposals},
              {"stage1_accepts", c.stage1_accepts},
              {"stage2_proposals", c.stage2_proposals},
              {"stage2_accepts", c.stage2_accepts},
              {"site_proposals", c.site_proposals},
              {"site_accepts", c.site_accepts},
              {"seq_updates", c.seq_updates},
              {"off_support", c.off_support}};
}

Counters counters_from_json(const json& j) {
  Counters c;
  j.at("full_passes").get_to(c.full_passes);
  j.at("param_proposals").get_to(c.param_proposals);
  j.at("param_accepts").get_to(c.param_accepts);
  j.at("stage1_proposals").get_to(c.stage1_proposals);
  j.at("stage1_accepts").get_to(c.stage1_accepts);
  j.at("stage2_proposals").get_to(c.stage2_proposals);
  j.at("stage2_accepts").get_to(c.stage2_accepts);
  j.at("site_proposals").get_to(c.site_proposals);
  j.at("site_accepts").get_to(c.site_accepts);
  j.at("seq_updates").get_to(c.seq_updates);
  j.at("off_support").get_to(c.off_support);
  return c;
}

}  // namespace

void write_observations(const fs::path& dir,
                        const RickerModel::Simulation& sim,
                        const ParamVec& theta_true, std::uint64_t seed) {
  fs::create_directories(dir);
  {
    std::ostringstream os;
    os << "time,y\n";
    for (std::size_t i = 0; i < sim.obs.size(); ++i) {
      os << (i + 1) << ',';
      if (sim.obs.observed(i)) os << sim.obs.count(i);
      os << '\n';
    }
    write_file(dir / "observations.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "time,m\n";
    for (std::size_t i = 0; i < sim.latent.size(); ++i)
      os << (i + 1) << ',' << fmt17(sim.latent.m[i]) << '\n';
    write_file(dir / "latent_true.csv", os.str());
  }
  const json meta{{"r", theta_true.r()},
                  {"sigma", theta_true.sigma()},
                  {"phi", theta_true.phi()},
                  {"n", sim.obs.size()},
                  {"obs_start", sim.obs.obs_start},
                  {"seed", seed},
                  {"code_version", kCodeVersion}};
  write_file(dir / "observations.meta.json", meta.dump(2) + "\n");
}

ObservedSeries read_observations(const fs::path& csv_path) {
  std::istringstream in(read_file(csv_path));
  std::string line;
  if (!std::getline(in, line) || line != "time,y")
    throw std::runtime_error("bad observations header in " +
                             csv_path.string());
  ObservedSeries z;
  std::size_t first_obs = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("bad observations row: " + line);
    const std::string val = line.substr(comma + 1);
    if (val.empty()) {
      z.y.emplace_back(std::nullopt);
    } else {
      z.y.emplace_back(std::stoll(val));
      if (first_obs == 0) first_obs = z.y.size();
    }
  }
  if (z.y.empty()) throw std::runtime_error("empty observations file");
  z.obs_start = first_obs == 0 ? z.y.size() + 1 : first_obs;
  return z;
}

void write_trace(const fs::path& dir, std::size_t chain_index,
                 const ChainTrace& trace, const RunConfig& config) {
  fs::create_directories(dir);
  const std::string stem = "chain_" + std::to_string(chain_index);
  {
    std::ostringstream os;
    os << "iter,log_r,log_sigma,log_phi,acc1,acc2\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto& p = trace.samples[i];
      os << trace.iteration[i] << ',' << fmt17(p.log_r) << ','
         << fmt17(p.log_sigma) << ',' << fmt17(p.log_phi) << ','
         << trace.flags[i].acc1 << ',' << trace.flags[i].acc2 << '\n';
    }
    write_file(dir / (stem + ".csv"), os.str());
  }
  const TraceMeta& m = trace.meta;
  const json meta{{"config", json::parse(serialize_config(config))},
                  {"chain_index", chain_index},
                  {"sampler", sampler_name(m.kind)},
                  {"seed", m.seed},
                  {"iterations", m.iterations},
                  {"thin", m.thin},
                  {"recorded", trace.size()},
                  {"time_per_iteration_s", m.time_per_iteration_s},
                  {"total_s", m.total_s},
                  {"kernel", m.kernel},
                  {"counters", counters_to_json(m.counters)},
                  {"complete", m.complete},
                  {"code_version", kCodeVersion}};
  write_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
}

LoadedTrace read_trace(const fs::path& csv_path) {
  LoadedTrace out;
  fs::path meta_path = csv_path;
  meta_path.replace_extension();
  meta_path += ".meta.json";

  json meta;
  try {
    meta = json::parse(read_file(meta_path));
  } catch (const json::exception& e) {
    throw std::runtime_error("bad trace metadata " + meta_path.string() +
                             ": " + e.what());
  }
  out.config = parse_config(meta.at("config").dump());
  meta.at("chain_index").get_to(out.chain_index);

  TraceMeta& m = out.trace.meta;
  const auto kind = sampler_from_name(meta.at("sampler").get<std::string>());
  if (!kind) throw std::runtime_error("unknown sampler in trace metadata");
  m.kind = *kind;
  m.pool_size = out.config.pool_size;
  m.scaling = out.config.scaling;
  m.updates_per_pool = out.config.updates_per_pool;
  m.n1 = out.config.n1;
  meta.at("seed").get_to(m.seed);
  meta.at("iterations").get_to(m.iterations);
  meta.at("thin").get_to(m.thin);
  meta.at("time_per_iteration_s").get_to(m.time_per_iteration_s);
  meta.at("total_s").get_to(m.total_s);
  meta.at("kernel").get_to(m.kernel);
  m.counters = counters_from_json(meta.at("counters"));
  meta.at("complete").get_to(m.complete);

  std::istringstream in(read_file(csv_path));
  std::string line;
  if (!std::getline(in, line) || line != "iter,log_r,log_sigma,log_phi,acc1,acc2")
    throw std::runtime_error("bad trace header in " + csv_path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(row, field, ','))
        throw std::runtime_error("short trace row: " + line);
      return field;
    };
    out.trace.iteration.push_back(std::stoull(next()));
    ParamVec p;
    p.log_r = std::stod(next());
    p.log_sigma = std::stod(next());
    p.log_phi = std::stod(next());
    out.trace.samples.push_back(p);
    IterStats s;
    s.acc1 = static_cast<std::uint32_t>(std::stoul(next()));
    s.acc2 = static_cast<std::uint32_t>(std::stoul(next()));
    out.trace.flags.push_back(s);
  }
  const std::size_t recorded = meta.at("recorded").get<std::size_t>();
  if (recorded != out.trace.size())
    throw std::runtime_error("trace row count mismatch in " +
                             csv_path.string());
  return out;
}

std::vector<fs::path> list_chain_files(const fs::path& dir) {
  std::vector<std::pair<unsigned long, fs::path>> indexed;
  if (!fs::is_directory(dir)) return {};
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("chain_", 0) == 0 && e.path().extension() == ".csv") {
      unsigned long idx = 0;
      try {
        idx = std::stoul(name.substr(6));
      } catch (...) {
        continue;
      }
      indexed.emplace_back(idx, e.path());
    }
  }
  std::sort(indexed.begin(), indexed.end());
  std::vector<fs::path> files;
  files.reserve(indexed.size());
  for (auto& [idx, p] : indexed) files.push_back(std::move(p));
  return files;
}

}  // namespace ehmm
