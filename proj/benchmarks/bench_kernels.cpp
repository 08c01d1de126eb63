#include <benchmark/benchmark.h>

#include "nlslab/combinatorics.hpp"
#include "nlslab/nls.hpp"
#include "nlslab/trace_norm.hpp"

using namespace nlslab;

static void BM_Transform(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, static_cast<int>(state.range(0)));
  auto f = smooth_random_field(g, 1);
  for (auto _ : state) {
    auto s = to_samples(f);
    benchmark::DoNotOptimize(from_samples(g, s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Transform)->RangeMultiplier(2)->Range(16, 256);

static void BM_Cubic(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, static_cast<int>(state.range(0)));
  auto f = smooth_random_field(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cubic_nonlinearity(f));
}
BENCHMARK(BM_Cubic)->RangeMultiplier(2)->Range(16, 128);

static void BM_FreeEvolve(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, static_cast<int>(state.range(0)));
  auto f = smooth_random_field(g, 3);
  for (auto _ : state) benchmark::DoNotOptimize(free_evolve(f, 0.37));
}
BENCHMARK(BM_FreeEvolve)->Arg(32)->Arg(128);

static void BM_StrangStep(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, static_cast<int>(state.range(0)));
  auto f = smooth_random_field(g, 4);
  for (auto _ : state) f = strang_step(f, 1e-3, 1.0);
}
BENCHMARK(BM_StrangStep)->Arg(32)->Arg(64);

static void BM_Collision(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, 32);
  auto gamma = tensor_power(smooth_random_field(g, 5), static_cast<int>(state.range(0)) + 1);
  for (auto _ : state) benchmark::DoNotOptimize(collision_full(gamma));
}
BENCHMARK(BM_Collision)->DenseRange(1, 3);

static void BM_TraceNorm(benchmark::State& state) {
  auto g = TorusGeometry::unit(2, 32);
  auto traj = solve_nls(smooth_random_field(g, 6), 0.02, 1e-3, 1.0);
  FactorizedDensityMatrix gamma(g, 2);
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i)
    gamma.append(tensor_power(traj.states[i], 2), i % 2 ? -1.0 : 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(gamma));
}
BENCHMARK(BM_TraceNorm)->Arg(4)->Arg(16);

static void BM_EnumerateMaps(benchmark::State& state) {
  for (auto _ : state) {
    std::size_t n = 0;
    for_each_collision_map(3, static_cast<int>(state.range(0)), [&](const CollisionMap&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateMaps)->DenseRange(2, 6, 2);
BENCHMARK_MAIN();
