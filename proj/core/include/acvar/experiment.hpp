#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "acvar/oracle.hpp"
#include "acvar/sa.hpp"

namespace acvar {

enum class RewardProfile { linear, uniform, file };

/// One experiment: a random chain instance, the exact oracle, one SA run,
/// and optionally the Monte Carlo conditioning oracle, all on the same
/// instance.
struct ExperimentConfig {
  std::size_t states = 0;  // required
  std::uint64_t seed = 0;
  double c = 0.9;
  Tail tail = Tail::upper;
  RewardProfile reward_profile = RewardProfile::linear;
  std::string reward_file;  // used when reward_profile == file
  double max_reward = 4.0;
  double bandwidth = 0.02;
  std::size_t warm_steps = 10000;
  std::size_t cap = 80000;
  double k_scale = 0.5;
  std::size_t term_window = 5000;
  double term_tol = 1e-2;
  std::filesystem::path output_dir = "out";
  bool run_mc_oracle = false;
  std::size_t mc_n = 20;
  std::size_t mc_paths = 200000;
};

/// Throws InvalidParameterError naming the offending field.
void validate_config(const ExperimentConfig& config);

/// Flat key=value or JSON file mirroring ExperimentConfig field names.
ExperimentConfig load_config_file(const std::filesystem::path& path);

struct ExperimentResult {
  MarkovChain chain;
  OracleSolution oracle;
  RunTrace trace;
  double mean_row_tv = 0.0;  // TV(p_T, p*), averaged over rows
};

/// Sub-seed purposes for one experiment seed.
enum : std::uint64_t {
  kSeedPurposeMatrix = 0,
  kSeedPurposeRewards = 1,
  kSeedPurposeTrajectory = 2,
  kSeedPurposeMcOracle = 3,
};

MarkovChain build_chain(const ExperimentConfig& config);

/// Writes trace.csv, freq.csv, summary.json, chain.json into output_dir.
/// Partial outputs are removed when a run fails.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// trace.csv: iter,zeta,running_avg_reward_tilted,threshold
/// freq.csv:  state,reward,count_orig,count_tilted, rows sorted by reward
void emit_plot_data(const RunTrace& trace, const OracleSolution& solution,
                    const MarkovChain& chain,
                    const std::filesystem::path& output_dir);

}  // namespace acvar
