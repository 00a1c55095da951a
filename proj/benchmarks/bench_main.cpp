#include <benchmark/benchmark.h>

#include "bnmix/builders.hpp"
#include "bnmix/fixtures.hpp"
#include "bnmix/hitting.hpp"
#include "bnmix/kernel.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/walker.hpp"

using namespace bnmix;

namespace {

RegionTaggedGraph paradigm2(int k) {
  ParadigmParams p;
  p.k = k;
  p.lump_copies = true;
  return build_paradigm2(p);
}

void BM_Kernel(benchmark::State& state) {
  const auto g = paradigm2(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transition_kernel(g, 0.5));
  state.counters["vertices"] = static_cast<double>(g.vertex_count());
}
BENCHMARK(BM_Kernel)->Arg(2)->Arg(3)->Arg(4);

void BM_HittingMoments(benchmark::State& state) {
  const auto g = paradigm2(static_cast<int>(state.range(0)));
  const auto k = transition_kernel(g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hitting_moments(k, {g.layer().marks.origin}));
  state.counters["vertices"] = static_cast<double>(g.vertex_count());
}
BENCHMARK(BM_HittingMoments)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Profile(benchmark::State& state) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mixing_profile(k, state.range(0)));
}
BENCHMARK(BM_Profile)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Squaring(benchmark::State& state) {
  const auto g = paradigm2(2);
  const auto k = transition_kernel(g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_mixing_times(k, {0.25}));
}
BENCHMARK(BM_Squaring)->Unit(benchmark::kMillisecond);

void BM_WalkerSteps(benchmark::State& state) {
  const auto g = make_fixture("paradigm2-scaled");
  const auto k = transition_kernel(g, 0.5);
  const Walker w(k);
  Rng rng = trajectory_rng(1, 1, 0);
  Vertex x = 0;
  for (auto _ : state) {
    x = w.step(x, rng);
    benchmark::DoNotOptimize(x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WalkerSteps);

}  // namespace

BENCHMARK_MAIN();
