#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ehmm/config.hpp"
#include "ehmm/ricker.hpp"
#include "ehmm/samplers.hpp"

namespace ehmm {

inline constexpr const char* kCodeVersion = "0.1.0";

// Dataset files: observations.csv ("time,y" with empty y at unobserved
// times), latent_true.csv ("time,m"), observations.meta.json.
void write_observations(const std::filesystem::path& dir,
                        const RickerModel::Simulation& sim,
                        const ParamVec& theta_true, std::uint64_t seed);

ObservedSeries read_observations(const std::filesystem::path& csv_path);

// Trace files: chain_<idx>.csv rows "iter,log_r,log_sigma,log_phi,acc1,acc2"
// plus a chain_<idx>.meta.json sidecar echoing the full run config, the
// counters, timing, and the code version.
void write_trace(const std::filesystem::path& dir, std::size_t chain_index,
                 const ChainTrace& trace, const RunConfig& config);

struct LoadedTrace {
  ChainTrace trace;
  RunConfig config;
  std::size_t chain_index = 0;
};

LoadedTrace read_trace(const std::filesystem::path& csv_path);

// chain_*.csv files in a run directory, sorted by chain index.
std::vector<std::filesystem::path> list_chain_files(
    const std::filesystem::path& dir);

}  // namespace ehmm
