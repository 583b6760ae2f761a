#pragma once

#include <random>
#include <vector>

#include "acvar/markov.hpp"
#include "acvar/matrix.hpp"

namespace acvar {

/// Perron eigenpair of a non-negative irreducible matrix, normalized so
/// V(i0) = 1.
struct PerronPair {
  double rho = 0.0;
  std::vector<double> V;
  std::size_t i0 = 0;
};

/// Exact solution bundle for one chain and threshold: tilt parameter,
/// Perron data at the tilt, the conditioned (tilted) kernel, its stationary
/// law, and the resulting ACVaR.
struct OracleSolution {
  double zeta_star = 0.0;
  double rho_star = 1.0;
  std::vector<double> V_star;
  Matrix p_star;
  std::vector<double> pi_star;
  double acvar = 0.0;
  double alpha = 0.0;
};

/// Empirical conditioned kernel from rejection sampling. Rows never visited
/// by an accepted path are flagged undefined and left all-zero.
struct McConditioningResult {
  Matrix kernel;
  std::vector<bool> row_defined;
  double acceptance_rate = 0.0;
  std::size_t accepted_paths = 0;
  std::size_t total_paths = 0;
};

/// M(i,j) = exp(zeta * g(i)) * p(i,j). Throws TiltOverflowError when the
/// exponential leaves the representable range.
Matrix tilted_matrix(const MarkovChain& chain, double zeta);

/// Power iteration from the all-ones vector, renormalizing by component i0
/// each sweep; tolerance 1e-12 max-abs, cap 1e6 sweeps.
PerronPair perron_pair(const Matrix& M, std::size_t i0 = 0);

/// Lambda(zeta) = ln rho_zeta, the limiting scaled log-MGF of cumulative
/// rewards.
double log_mgf(const MarkovChain& chain, double zeta);

/// Lambda'(zeta), computed exactly as the stationary mean of g under the
/// zeta-tilted kernel. Nondecreasing in zeta by convexity.
double lambda_prime(const MarkovChain& chain, double zeta);

/// Unique maximizer of zeta*alpha - Lambda(zeta) over zeta >= 0. Returns 0
/// when alpha <= Lambda'(0); throws UnattainableThresholdError when
/// alpha >= max g.
double solve_zeta_star(const MarkovChain& chain, double alpha);

/// p*(i,j) = exp(zeta g(i)) p(i,j) V(j) / (rho V(i)), rows renormalized to
/// absorb round-off.
Matrix tilted_kernel(const MarkovChain& chain, double zeta);

/// Full exact pipeline: zeta* -> p* -> pi* -> ACVaR = E_{pi*}[g].
OracleSolution acvar_oracle(const MarkovChain& chain, double alpha);

/// E_{pi*}[h] for an arbitrary per-state function h.
double conditioned_expectation(const OracleSolution& solution,
                               const std::vector<double>& h);

/// Brute-force validation of the conditioned-kernel limit: simulate
/// num_paths length-n paths under P from start_state, keep those with
/// average reward >= alpha, tally transition frequencies.
McConditioningResult mc_conditioning_oracle(const MarkovChain& chain, double alpha,
                                            std::size_t n, std::size_t num_paths,
                                            std::mt19937_64& rng,
                                            std::size_t start_state = 0);

/// Half L1 distance between two probability vectors.
double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace acvar
