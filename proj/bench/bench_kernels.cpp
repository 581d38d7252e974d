// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "firmrecon/coeffs.hpp"
#include "firmrecon/metrics.hpp"
#include "firmrecon/recon.hpp"
#include "firmrecon/rng.hpp"
#include "firmrecon/synth.hpp"

using namespace firmrecon;

namespace {

const Economy& economy(std::size_t n) {
  static std::vector<std::pair<std::size_t, Economy>> cache;
  for (const auto& [size, e] : cache) {
    if (size == n) return e;
  }
  SynthConfig cfg;
  cfg.n_firms = n;
  cfg.target_mean_degree = 10.0;
  cfg.seed = 1;
  cache.emplace_back(n, generate_ground_truth(cfg));
  return cache.back().second;
}

template <bool Parallel>
void BM_Ipf(benchmark::State& state) {
  const Economy& e = economy(static_cast<std::size_t>(state.range(0)));
  const Strengths s = strengths(e.network);
  const Topology& t = e.network.topology();
  const std::vector<double> init = MaxEntPrescription(s.s_out, s.s_in).on(t);
  for (auto _ : state) {
    IpfResult r = Parallel ? ipf_balance(t, s.s_out, s.s_in, init)
                           : ipf_balance_serial(t, s.s_out, s.s_in, init);
    benchmark::DoNotOptimize(r.weights.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t.n_edges()));
}

template <bool Parallel>
void BM_Multipliers(benchmark::State& state) {
  const Economy& e = economy(static_cast<std::size_t>(state.range(0)));
  const CoefficientMatrix t = technical_coefficients(e.network, e.accounts);
  for (auto _ : state) {
    auto o = Parallel ? output_multipliers(t) : output_multipliers_serial(t);
    benchmark::DoNotOptimize(o.data());
  }
}

template <bool Parallel>
void BM_Influence(benchmark::State& state) {
  const Economy& e = economy(static_cast<std::size_t>(state.range(0)));
  const CoefficientMatrix omega = input_shares(e.network);
  for (auto _ : state) {
    auto v = Parallel ? influence_from_shares(omega, 0.333) : influence_from_shares_serial(omega, 0.333);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_PowerLaw(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.pareto(1.0, 1.2);
  for (auto _ : state) {
    PowerLawFit f = Parallel ? powerlaw_fit(x) : powerlaw_fit_serial(x);
    benchmark::DoNotOptimize(f.gamma);
  }
}

}  // namespace

BENCHMARK(BM_Ipf<false>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ipf<true>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multipliers<false>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multipliers<true>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Influence<false>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Influence<true>)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerLaw<false>)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerLaw<true>)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
