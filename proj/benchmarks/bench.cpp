#include <benchmark/benchmark.h>

#include <cmath>

#include "trikurve/classifier.hpp"
#include "trikurve/energy_flow.hpp"
#include "trikurve/frenet.hpp"
#include "trikurve/tension.hpp"

using namespace trikurve;

static void BM_p4_roots(benchmark::State& state) {
  double al = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p4_roots(0.7, -1.1, al));
    al = al < 3.0 ? al + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_p4_roots);

static void BM_reconstruct_r3(benchmark::State& state) {
  const auto prof = FrenetProfile::theorem_existence();
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_r3(prof, {1.0, 2.0}, step));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_reconstruct_r3)->RangeMultiplier(4)->Range(1000, 16000)->Complexity();

static void BM_tension_r3(benchmark::State& state) {
  const auto c = spaceform2_circle(1.0, std::sqrt(2.0), static_cast<std::size_t>(state.range(0)),
                                   1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(tension_r(c, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_tension_r3)->RangeMultiplier(4)->Range(1000, 16000)->Complexity();

static void BM_trienergy_gradient(benchmark::State& state) {
  const auto s = circle_flow_state(1.0, 1.2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(trienergy_gradient(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_trienergy_gradient)->RangeMultiplier(2)->Range(50, 800)->Complexity();

static void BM_circle_gradient_probe(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(circle_gradient_probe(1.0, 2.0, 1e-2, 0.4));
}
BENCHMARK(BM_circle_gradient_probe);

BENCHMARK_MAIN();
