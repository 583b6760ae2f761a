#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "acvar/matrix.hpp"

namespace acvar {

/// Finite-state Markov chain: row-stochastic kernel P plus a per-state
/// reward profile g. Immutable by convention after construction.
struct MarkovChain {
  std::size_t s = 0;         ///< state count
  Matrix P;                  ///< s x s transition probabilities
  std::vector<double> g;     ///< per-state rewards
};

struct StationaryDistribution {
  std::vector<double> pi;
};

/// Throws if P is not row-stochastic (1e-12 per row), has entries outside
/// [0,1], or g has a non-finite value.
void validate_chain(const MarkovChain& chain);

/// Deterministic sub-seed for a given purpose index, so matrix generation
/// and trajectory simulation draw from independent streams of one run seed.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t purpose);

/// Random instance: each entry Unif(0,1) + 0.5, rows normalized.
/// Rewards are zero-filled; attach a profile separately.
MarkovChain generate_random_chain(std::size_t s, std::uint64_t seed);

/// g(i) = max_reward * i / (s - 1).
std::vector<double> linear_reward_profile(std::size_t s, double max_reward);

/// Deterministic rewards drawn i.i.d. Unif(0, max_reward).
std::vector<double> uniform_reward_profile(std::size_t s, double max_reward,
                                           std::uint64_t seed);

/// One step of the chain (or any row-stochastic kernel) by inverse-transform
/// sampling on the cumulative row. Throws InvalidKernelError if the row does
/// not sum to 1 within 1e-9.
std::size_t simulate_step(const Matrix& kernel, std::size_t state,
                          std::mt19937_64& rng);

/// Fixed point of pi -> pi P by power iteration from the uniform vector.
/// Tolerance 1e-12 max-abs, cap 1e6 sweeps.
StationaryDistribution stationary_distribution(const Matrix& P);

using StepSampler = std::function<std::size_t(std::size_t, std::mt19937_64&)>;
using RewardObserver = std::function<double(std::size_t)>;

/// Warm-start reward discovery: simulate 10*s steps with the given sampler,
/// record the reward at the first visit to each state, zero elsewhere.
std::vector<double> estimate_rewards_by_exploration(const StepSampler& step,
                                                    const RewardObserver& reward,
                                                    std::size_t s,
                                                    std::size_t start_state,
                                                    std::mt19937_64& rng);

}  // namespace acvar
