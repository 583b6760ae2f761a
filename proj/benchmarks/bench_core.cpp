#include <random>

#include <benchmark/benchmark.h>

#include "acvar/density.hpp"
#include "acvar/markov.hpp"
#include "acvar/oracle.hpp"
#include "acvar/sa.hpp"

using namespace acvar;

namespace {

MarkovChain protocol_chain(std::size_t s) {
  MarkovChain chain = generate_random_chain(s, 1);
  chain.g = linear_reward_profile(s, 4.0);
  return chain;
}

void BM_generate_random_chain(benchmark::State& state) {
  const std::size_t s = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_random_chain(s, 1));
  }
}
BENCHMARK(BM_generate_random_chain)->Arg(40)->Arg(150);

void BM_simulate_step(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(40);
  std::mt19937_64 rng(2);
  std::size_t x = 0;
  for (auto _ : state) {
    x = simulate_step(chain.P, x, rng);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_simulate_step);

void BM_stationary_distribution(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_distribution(chain.P));
  }
}
BENCHMARK(BM_stationary_distribution)->Arg(40)->Arg(150);

void BM_perron_pair(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(static_cast<std::size_t>(state.range(0)));
  const Matrix m = tilted_matrix(chain, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perron_pair(m));
  }
}
BENCHMARK(BM_perron_pair)->Arg(40)->Arg(150);

void BM_solve_zeta_star(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(40);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_zeta_star(chain, 3.5));
  }
}
BENCHMARK(BM_solve_zeta_star);

void BM_kde_inverse_cdf(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(40);
  std::mt19937_64 rng(3);
  std::vector<double> samples;
  samples.reserve(10000);
  std::size_t x = 0;
  for (std::size_t t = 0; t < 10000; ++t) {
    x = simulate_step(chain.P, x, rng);
    samples.push_back(chain.g[x]);
  }
  const KdeModel model = fit_kde(samples, 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.inverse_cdf(0.9));
  }
}
BENCHMARK(BM_kde_inverse_cdf);

void BM_sa_run_short(benchmark::State& state) {
  const MarkovChain chain = protocol_chain(40);
  RunOptions options;
  options.warm_steps = 1000;
  options.cap = 2000;
  options.term_tol = 1e-12;  // never terminates early inside the cap
  for (auto _ : state) {
    std::mt19937_64 rng(4);
    benchmark::DoNotOptimize(run(chain, 0.9, make_schedule(0.5), options, rng));
  }
}
BENCHMARK(BM_sa_run_short)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
