#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "acvar/markov.hpp"
#include "acvar/matrix.hpp"

namespace acvar {

enum class Tail { upper, lower };

/// Two-timescale step sizes driven by one scaling parameter:
/// a(n) = k/(1+(n+1)^0.6) on the fast clock, b(n) = k/(1+(n+1)^0.8) on the
/// slow clock, so b(n)/a(n) -> 0.
struct StepSchedule {
  double k = 0.1;

  double a(std::size_t n) const;
  double b(std::size_t n) const;
};

StepSchedule make_schedule(double k);

/// Evolving state of the two-timescale iteration: tilt estimate zeta_n,
/// value estimate V_n, tilted kernel estimate p_n, and per-state visit
/// counts (the local clocks of the asynchronous fast update).
struct SaState {
  double zeta = 1.0;
  std::vector<double> V;
  Matrix p_tilt;
  std::vector<std::size_t> visits;
  std::size_t iter = 0;
  double threshold = 0.0;
  std::size_t i0 = 0;
  std::size_t current_state = 0;
};

/// Per-iteration record of one run plus the frequency histograms behind the
/// original-vs-tilted state occupancy comparison.
struct RunTrace {
  std::vector<double> zeta_series;
  std::vector<double> avg_reward_series;
  double threshold = 0.0;
  std::vector<std::size_t> freq_orig;
  std::vector<std::size_t> freq_tilted;
  std::optional<std::size_t> terminated_at;
  SaState final_state;
};

struct RunOptions {
  std::size_t warm_steps = 10000;
  std::size_t cap = 80000;
  std::size_t term_window = 5000;
  double term_tol = 1e-2;
  double bandwidth = 0.02;
  /// Reference state for the V normalization. Defaults to the state of
  /// extremal reward on the conditioned side (max for upper tail, min for
  /// lower): the tilted chain visits it often, which keeps the anchor
  /// V(i0) updating. Anchors that starve stall the fast timescale.
  std::optional<std::size_t> i0;
  /// Tilted-chain start state; defaults to i0 so the anchor is the first
  /// entry of V to update.
  std::optional<std::size_t> start_state;
  Tail tail = Tail::upper;
  /// When false the reward profile is discovered by exploratory simulation
  /// (unvisited states get reward 0) before the warm start.
  bool rewards_known = true;
  /// Off by default: keep refreshing the KDE threshold after the warm start.
  bool update_threshold = false;
  std::size_t threshold_update_stride = 1000;
};

/// Replace row k of the tilted-kernel estimate with the normalized
/// e^{zeta g(k)} p(k,.) V(.) / (V(i0) V(k)) row. Other rows untouched.
void tilted_row_update(SaState& state, const MarkovChain& chain, std::size_t k);

/// Projected slow-timescale step for zeta: clamp to [0,inf) in upper-tail
/// mode, (-inf,0] in lower-tail mode.
double slow_update(double zeta, double b_n, double threshold, double reward_sample,
                   Tail tail);

/// Asynchronous fast-timescale step for V(k), using the local clock
/// visits[k] and the importance-sampling ratio p(k,next)/p_n(k,next).
/// Increments the local clock afterwards.
void fast_update(SaState& state, const MarkovChain& chain,
                 const StepSchedule& schedule, std::size_t k,
                 std::size_t next_state);

/// True iff max-min over the last `window` zeta values is <= tol.
bool check_termination(const std::vector<double>& zeta_series, std::size_t window,
                       double tol);

/// Full run: warm start + KDE threshold, then the coupled iteration until
/// termination or the cap.
RunTrace run(const MarkovChain& chain, double c, const StepSchedule& schedule,
             const RunOptions& options, std::mt19937_64& rng);

}  // namespace acvar
