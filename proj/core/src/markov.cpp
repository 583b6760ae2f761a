#include "acvar/markov.hpp"

#include <cmath>
#include <string>

#include "acvar/errors.hpp"

namespace acvar {

void validate_chain(const MarkovChain& chain) {
  if (chain.s < 2) {
    throw InvalidDimensionError("chain must have at least 2 states");
  }
  if (chain.P.rows() != chain.s || chain.P.cols() != chain.s) {
    throw InvalidDimensionError("transition matrix shape does not match state count");
  }
  if (chain.g.size() != chain.s) {
    throw InvalidDimensionError("reward profile length does not match state count");
  }
  for (std::size_t i = 0; i < chain.s; ++i) {
    double sum = 0.0;
    for (double p : chain.P.row(i)) {
      if (p < 0.0 || p > 1.0) {
        throw InvalidKernelError("transition probability outside [0,1] in row " +
                                 std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidKernelError("row " + std::to_string(i) +
                               " does not sum to 1 (sum=" + std::to_string(sum) + ")");
    }
  }
  for (double r : chain.g) {
    if (!std::isfinite(r)) {
      throw InvalidInputError("non-finite reward in profile");
    }
  }
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t purpose) {
  // splitmix64 finalizer over seed xor a purpose-offset increment
  std::uint64_t z = seed + (purpose + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MarkovChain generate_random_chain(std::size_t s, std::uint64_t seed) {
  if (s < 2) {
    throw InvalidDimensionError("generate_random_chain requires s >= 2");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix P(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      P(i, j) = unif(rng) + 0.5;
      sum += P(i, j);
    }
    for (std::size_t j = 0; j < s; ++j) {
      P(i, j) /= sum;
    }
  }
  return MarkovChain{s, std::move(P), std::vector<double>(s, 0.0)};
}

std::vector<double> linear_reward_profile(std::size_t s, double max_reward) {
  if (s < 2) {
    throw InvalidDimensionError("linear_reward_profile requires s >= 2");
  }
  if (!(max_reward > 0.0)) {
    throw InvalidParameterError("max_reward must be positive");
  }
  std::vector<double> g(s);
  for (std::size_t i = 0; i < s; ++i) {
    g[i] = max_reward * static_cast<double>(i) / static_cast<double>(s - 1);
  }
  return g;
}

std::vector<double> uniform_reward_profile(std::size_t s, double max_reward,
                                           std::uint64_t seed) {
  if (s < 2) {
    throw InvalidDimensionError("uniform_reward_profile requires s >= 2");
  }
  if (!(max_reward > 0.0)) {
    throw InvalidParameterError("max_reward must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, max_reward);
  std::vector<double> g(s);
  for (double& r : g) {
    r = unif(rng);
  }
  return g;
}

std::size_t simulate_step(const Matrix& kernel, std::size_t state,
                          std::mt19937_64& rng) {
  if (state >= kernel.rows()) {
    throw InvalidInputError("state index out of range");
  }
  auto row = kernel.row(state);
  double sum = 0.0;
  for (double p : row) {
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidKernelError("row " + std::to_string(state) +
                             " is not a probability vector (sum=" +
                             std::to_string(sum) + ")");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cum = 0.0;
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    cum += row[j];
    if (u < cum) {
      return j;
    }
  }
  return row.size() - 1;
}

StationaryDistribution stationary_distribution(const Matrix& P) {
  const std::size_t s = P.rows();
  if (s == 0 || P.cols() != s) {
    throw InvalidDimensionError("stationary_distribution needs a square matrix");
  }
  std::vector<double> pi(s, 1.0 / static_cast<double>(s));
  std::vector<double> next(s);
  constexpr std::size_t kMaxSweeps = 1000000;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t j = 0; j < s; ++j) {
      next[j] = 0.0;
    }
    for (std::size_t i = 0; i < s; ++i) {
      const double w = pi[i];
      auto row = P.row(i);
      for (std::size_t j = 0; j < s; ++j) {
        next[j] += w * row[j];
      }
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      diff = std::max(diff, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
    if (diff < 1e-12) {
      return StationaryDistribution{std::move(pi)};
    }
  }
  throw ConvergenceFailureError(
      "power iteration for the stationary distribution did not converge "
      "(reducible or periodic chain?)");
}

std::vector<double> estimate_rewards_by_exploration(const StepSampler& step,
                                                    const RewardObserver& reward,
                                                    std::size_t s,
                                                    std::size_t start_state,
                                                    std::mt19937_64& rng) {
  std::vector<double> g(s, 0.0);
  std::vector<bool> seen(s, false);
  std::size_t state = start_state;
  g[state] = reward(state);
  seen[state] = true;
  const std::size_t budget = 10 * s;
  for (std::size_t t = 0; t < budget; ++t) {
    state = step(state, rng);
    if (!seen[state]) {
      g[state] = reward(state);
      seen[state] = true;
    }
  }
  return g;
}

}  // namespace acvar
