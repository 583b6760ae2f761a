#include "acvar/sa.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "acvar/density.hpp"
#include "acvar/errors.hpp"

namespace acvar {

namespace {

constexpr double kMaxExpArg = 700.0;
constexpr double kLikelihoodFloor = 1e-12;

double tilt_weight(double zeta, double reward, std::size_t iter) {
  const double arg = zeta * reward;
  if (arg > kMaxExpArg) {
    throw TiltOverflowError("exp(zeta*g) overflow at iteration " +
                            std::to_string(iter) + "; rescale the rewards");
  }
  return std::exp(arg);
}

}  // namespace

double StepSchedule::a(std::size_t n) const {
  return k / (1.0 + std::pow(static_cast<double>(n + 1), 0.6));
}

double StepSchedule::b(std::size_t n) const {
  return k / (1.0 + std::pow(static_cast<double>(n + 1), 0.8));
}

StepSchedule make_schedule(double k) {
  if (!(k > 0.0)) {
    throw InvalidParameterError("step scale k must be positive");
  }
  if (k / 2.0 > 1.0) {
    // a(0) = k/2 must stay <= 1 or the fast update can drive V negative
    throw InvalidParameterError("step scale k must be <= 2");
  }
  return StepSchedule{k};
}

void tilted_row_update(SaState& state, const MarkovChain& chain, std::size_t k) {
  const double w =
      tilt_weight(state.zeta, chain.g[k], state.iter) /
      (state.V[state.i0] * state.V[k]);
  auto row = state.p_tilt.row(k);
  auto base = chain.P.row(k);
  double sum = 0.0;
  for (std::size_t l = 0; l < row.size(); ++l) {
    row[l] = w * base[l] * state.V[l];
    sum += row[l];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw InvalidStateError("tilted row update produced a degenerate row at state " +
                            std::to_string(k));
  }
  for (double& p : row) {
    p /= sum;
  }
}

double slow_update(double zeta, double b_n, double threshold, double reward_sample,
                   Tail tail) {
  const double next = zeta + b_n * (threshold - reward_sample);
  return tail == Tail::upper ? std::max(0.0, next) : std::min(0.0, next);
}

void fast_update(SaState& state, const MarkovChain& chain,
                 const StepSchedule& schedule, std::size_t k,
                 std::size_t next_state) {
  const double realized = state.p_tilt(k, next_state);
  if (realized < kLikelihoodFloor) {
    throw LikelihoodRatioOverflowError(
        "realized tilted transition probability below 1e-12 at iteration " +
        std::to_string(state.iter));
  }
  const double ratio = chain.P(k, next_state) / realized;
  const double target = tilt_weight(state.zeta, chain.g[k], state.iter) /
                        state.V[state.i0] * ratio * state.V[next_state];
  const double a_n = schedule.a(state.visits[k]);
  state.V[k] += a_n * (target - state.V[k]);
  if (!(state.V[k] > 0.0)) {
    throw InvalidStateError("value estimate left the positive cone at iteration " +
                            std::to_string(state.iter));
  }
  ++state.visits[k];
}

bool check_termination(const std::vector<double>& zeta_series, std::size_t window,
                       double tol) {
  if (window < 2 || zeta_series.size() < window) {
    return false;
  }
  auto first = zeta_series.end() - static_cast<std::ptrdiff_t>(window);
  auto [lo, hi] = std::minmax_element(first, zeta_series.end());
  return *hi - *lo <= tol;
}

RunTrace run(const MarkovChain& chain, double c, const StepSchedule& schedule,
             const RunOptions& options, std::mt19937_64& rng) {
  validate_chain(chain);
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidParameterError("quantile level c must lie in (0,1)");
  }
  if (options.warm_steps < 1 || options.cap < 1) {
    throw InvalidParameterError("warm_steps and cap must be positive");
  }
  const std::size_t extremal =
      options.tail == Tail::upper
          ? static_cast<std::size_t>(
                std::max_element(chain.g.begin(), chain.g.end()) - chain.g.begin())
          : static_cast<std::size_t>(
                std::min_element(chain.g.begin(), chain.g.end()) - chain.g.begin());
  const std::size_t i0 = options.i0.value_or(extremal);
  const std::size_t start_state = options.start_state.value_or(i0);
  if (i0 >= chain.s || start_state >= chain.s) {
    throw InvalidInputError("reference or start state out of range");
  }

  MarkovChain eff = chain;
  if (!options.rewards_known) {
    eff.g = estimate_rewards_by_exploration(
        [&chain](std::size_t state, std::mt19937_64& r) {
          return simulate_step(chain.P, state, r);
        },
        [&chain](std::size_t state) { return chain.g[state]; }, chain.s,
        start_state, rng);
  }

  const double g_span = *std::max_element(eff.g.begin(), eff.g.end()) -
                        *std::min_element(eff.g.begin(), eff.g.end());
  if (g_span * 10.0 > std::log(1e30)) {
    std::cerr << "acvar: warning: reward span " << g_span
              << " risks exp overflow during tilting; consider rescaling\n";
  }

  // warm start under the original kernel
  std::vector<double> samples;
  samples.reserve(options.warm_steps);
  std::size_t x_orig = start_state;
  for (std::size_t t = 0; t < options.warm_steps; ++t) {
    x_orig = simulate_step(chain.P, x_orig, rng);
    samples.push_back(eff.g[x_orig]);
  }
  KdeModel kde = fit_kde(samples, options.bandwidth);
  if (!bandwidth_preserves_multimodality(samples, options.bandwidth)) {
    std::cerr << "acvar: warning: bandwidth " << options.bandwidth
              << " is not below the smallest reward gap; the density estimate "
                 "may merge modes\n";
  }
  double threshold = kde.inverse_cdf(c);

  SaState state;
  state.zeta = options.tail == Tail::upper ? 1.0 : -1.0;
  state.V.assign(chain.s, 1.0);
  state.p_tilt = chain.P;
  state.visits.assign(chain.s, 0);
  state.threshold = threshold;
  state.i0 = i0;
  state.current_state = start_state;

  RunTrace trace;
  trace.threshold = threshold;
  trace.freq_orig.assign(chain.s, 0);
  trace.freq_tilted.assign(chain.s, 0);
  trace.zeta_series.reserve(options.cap);
  trace.avg_reward_series.reserve(options.cap);

  double reward_sum = 0.0;
  for (std::size_t t = 0; t < options.cap; ++t) {
    state.iter = t;
    const std::size_t k = state.current_state;
    tilted_row_update(state, eff, k);

    const std::size_t next_orig = simulate_step(chain.P, x_orig, rng);
    const std::size_t next = simulate_step(state.p_tilt, k, rng);
    ++trace.freq_orig[next_orig];
    ++trace.freq_tilted[next];

    state.zeta = slow_update(state.zeta, schedule.b(t), state.threshold,
                             eff.g[next], options.tail);
    fast_update(state, eff, schedule, k, next);

    if (options.update_threshold) {
      samples.push_back(eff.g[next_orig]);
      if ((t + 1) % options.threshold_update_stride == 0) {
        kde = fit_kde(samples, options.bandwidth);
        state.threshold = kde.inverse_cdf(c);
      }
    }

    x_orig = next_orig;
    state.current_state = next;
    reward_sum += eff.g[next];
    trace.zeta_series.push_back(state.zeta);
    trace.avg_reward_series.push_back(reward_sum / static_cast<double>(t + 1));

    if (check_termination(trace.zeta_series, options.term_window,
                          options.term_tol)) {
      trace.terminated_at = t + 1;
      break;
    }
  }
  state.iter = trace.zeta_series.size();
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace acvar
