#include "acvar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acvar/errors.hpp"

namespace acvar {

namespace {

// exp arguments past this leave double range
constexpr double kMaxExpArg = 700.0;

double max_abs_reward(const MarkovChain& chain) {
  double m = 0.0;
  for (double r : chain.g) {
    m = std::max(m, std::abs(r));
  }
  return m;
}

}  // namespace

Matrix tilted_matrix(const MarkovChain& chain, double zeta) {
  if (!std::isfinite(zeta)) {
    throw InvalidParameterError("tilt parameter must be finite");
  }
  const std::size_t s = chain.s;
  Matrix M(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    const double arg = zeta * chain.g[i];
    if (arg > kMaxExpArg) {
      throw TiltOverflowError(
          "exp(zeta*g) overflows at state " + std::to_string(i) +
          "; rescale the reward profile");
    }
    const double w = std::exp(arg);
    for (std::size_t j = 0; j < s; ++j) {
      M(i, j) = w * chain.P(i, j);
    }
  }
  return M;
}

PerronPair perron_pair(const Matrix& M, std::size_t i0) {
  const std::size_t s = M.rows();
  if (s == 0 || M.cols() != s) {
    throw InvalidDimensionError("perron_pair needs a square matrix");
  }
  if (i0 >= s) {
    throw InvalidInputError("reference state out of range");
  }
  std::vector<double> V(s, 1.0);
  std::vector<double> W(s);
  constexpr std::size_t kMaxSweeps = 1000000;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t i = 0; i < s; ++i) {
      double acc = 0.0;
      auto row = M.row(i);
      for (std::size_t j = 0; j < s; ++j) {
        acc += row[j] * V[j];
      }
      W[i] = acc;
    }
    const double rho = W[i0];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw SpectralFailureError("Perron iteration produced a non-positive pivot");
    }
    double diff = 0.0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      W[i] /= rho;
      diff = std::max(diff, std::abs(W[i] - V[i]));
      vmax = std::max(vmax, std::abs(W[i]));
    }
    V.swap(W);
    // tolerance scales with the component range; an absolute 1e-12 is
    // unrepresentable when the eigenvector spans many orders of magnitude
    if (diff < 1e-12 * std::max(vmax, 1.0)) {
      return PerronPair{rho, std::move(V), i0};
    }
  }
  throw SpectralFailureError("Perron power iteration did not converge");
}

double log_mgf(const MarkovChain& chain, double zeta) {
  return std::log(perron_pair(tilted_matrix(chain, zeta)).rho);
}

double lambda_prime(const MarkovChain& chain, double zeta) {
  const Matrix kernel = tilted_kernel(chain, zeta);
  const StationaryDistribution pi = stationary_distribution(kernel);
  return std::inner_product(pi.pi.begin(), pi.pi.end(), chain.g.begin(), 0.0);
}

double solve_zeta_star(const MarkovChain& chain, double alpha) {
  if (!std::isfinite(alpha)) {
    throw InvalidParameterError("threshold must be finite");
  }
  const double mean0 = lambda_prime(chain, 0.0);
  if (alpha <= mean0) {
    return 0.0;  // boundary maximizer
  }
  const double g_max = *std::max_element(chain.g.begin(), chain.g.end());
  if (alpha >= g_max) {
    throw UnattainableThresholdError(
        "threshold " + std::to_string(alpha) +
        " is at or above the maximal reward " + std::to_string(g_max));
  }
  const double zeta_cap = kMaxExpArg / std::max(max_abs_reward(chain), 1e-300);
  double hi = 1.0;
  while (lambda_prime(chain, hi) <= alpha) {
    hi *= 2.0;
    if (hi > zeta_cap) {
      throw UnattainableThresholdError(
          "no finite tilt reaches threshold " + std::to_string(alpha) +
          " before exp overflow");
    }
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_prime(chain, mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Matrix tilted_kernel(const MarkovChain& chain, double zeta) {
  if (zeta == 0.0) {
    return chain.P;  // identity tilt, exactly
  }
  const Matrix M = tilted_matrix(chain, zeta);
  const PerronPair pp = perron_pair(M);
  const std::size_t s = chain.s;
  Matrix K(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      K(i, j) = M(i, j) * pp.V[j] / (pp.rho * pp.V[i]);
      sum += K(i, j);
    }
    // rows sum to 1 by the eigen-equation; renormalize to absorb round-off
    for (std::size_t j = 0; j < s; ++j) {
      K(i, j) /= sum;
    }
  }
  return K;
}

OracleSolution acvar_oracle(const MarkovChain& chain, double alpha) {
  OracleSolution sol;
  sol.alpha = alpha;
  sol.zeta_star = solve_zeta_star(chain, alpha);
  const PerronPair pp = perron_pair(tilted_matrix(chain, sol.zeta_star));
  sol.rho_star = pp.rho;
  sol.V_star = pp.V;
  sol.p_star = tilted_kernel(chain, sol.zeta_star);
  sol.pi_star = stationary_distribution(sol.p_star).pi;
  sol.acvar = std::inner_product(sol.pi_star.begin(), sol.pi_star.end(),
                                 chain.g.begin(), 0.0);
  return sol;
}

double conditioned_expectation(const OracleSolution& solution,
                               const std::vector<double>& h) {
  if (h.size() != solution.pi_star.size()) {
    throw InvalidInputError("h length does not match state count");
  }
  return std::inner_product(solution.pi_star.begin(), solution.pi_star.end(),
                            h.begin(), 0.0);
}

McConditioningResult mc_conditioning_oracle(const MarkovChain& chain, double alpha,
                                            std::size_t n, std::size_t num_paths,
                                            std::mt19937_64& rng,
                                            std::size_t start_state) {
  if (n < 2) {
    throw InvalidParameterError("path length must be at least 2");
  }
  if (num_paths < 1) {
    throw InvalidParameterError("need at least one path");
  }
  if (start_state >= chain.s) {
    throw InvalidInputError("start state out of range");
  }
  const std::size_t s = chain.s;
  Matrix counts(s, s);
  std::vector<std::size_t> path(n);
  std::size_t accepted = 0;
  for (std::size_t p = 0; p < num_paths; ++p) {
    path[0] = start_state;
    double reward_sum = chain.g[start_state];
    for (std::size_t k = 1; k < n; ++k) {
      path[k] = simulate_step(chain.P, path[k - 1], rng);
      reward_sum += chain.g[path[k]];
    }
    if (reward_sum / static_cast<double>(n) >= alpha) {
      ++accepted;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        counts(path[k], path[k + 1]) += 1.0;
      }
    }
  }
  if (accepted == 0) {
    throw NoAcceptanceError(
        "no path met the threshold; alpha too deep in the tail for the given "
        "n and num_paths");
  }
  McConditioningResult result;
  result.kernel = Matrix(s, s);
  result.row_defined.assign(s, false);
  result.accepted_paths = accepted;
  result.total_paths = num_paths;
  result.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(num_paths);
  for (std::size_t i = 0; i < s; ++i) {
    double row_total = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      row_total += counts(i, j);
    }
    if (row_total > 0.0) {
      result.row_defined[i] = true;
      for (std::size_t j = 0; j < s; ++j) {
        result.kernel(i, j) = counts(i, j) / row_total;
      }
    }
  }
  return result;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("total_variation length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::abs(a[i] - b[i]);
  }
  return 0.5 * acc;
}

}  // namespace acvar
