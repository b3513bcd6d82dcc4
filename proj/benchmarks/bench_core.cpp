#include <random>

#include <benchmark/benchmark.h>

#include "annealab/adiabatic.hpp"
#include "annealab/convergence.hpp"
#include "annealab/markov.hpp"
#include "annealab/qmap.hpp"

using namespace annealab;

namespace {

void BM_BuildGlauber(benchmark::State& state) {
  const auto model = IsingModel::periodic_chain(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_glauber(model, 1.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGlauber)->DenseRange(4, 10, 2);

void BM_Eigendecompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto model = random_model(static_cast<int>(state.range(0)), rng);
  const auto w = build_glauber(model, 1.5);
  const auto h = map_to_hsa(w, 1.5, model.h0_diagonal());
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h.matrix));
}
BENCHMARK(BM_Eigendecompose)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_IntegrateMaster(benchmark::State& state) {
  const auto model = IsingModel::periodic_chain(static_cast<int>(state.range(0)), 1.0);
  const auto sched = Schedule::linear(0.2, 3.0, 100.0, 3.0);
  MasterOptions opt;
  opt.steps = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_master(model, sched, opt));
}
BENCHMARK(BM_IntegrateMaster)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_IntegrateBSA(benchmark::State& state) {
  const auto model = IsingModel::periodic_chain(static_cast<int>(state.range(0)), 1.0);
  const auto sched = Schedule::linear(0.2, 3.0, 1.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_b_sa(model, sched, RateFamily::Glauber));
}
BENCHMARK(BM_IntegrateBSA)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_GapScan(benchmark::State& state) {
  std::vector<double> betas;
  for (int k = 0; k <= 12; ++k) betas.push_back(0.25 * k);
  for (auto _ : state) benchmark::DoNotOptimize(gap_scan(betas, {static_cast<int>(state.range(0))}));
}
BENCHMARK(BM_GapScan)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_DeltaIntegral(benchmark::State& state) {
  const auto g = make_geman_params(0.315, 4, 0.5, 0.2, -0.587, 4.66e-4);
  const auto sched = Schedule::geman(g, 1e6, 1000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(delta_integral(sched, g.a, g.c, g.p, g.n, 1.0, 1e6));
}
BENCHMARK(BM_DeltaIntegral)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
