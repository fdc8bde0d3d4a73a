#include <benchmark/benchmark.h>

#include "lrk/rng.hpp"

namespace {

void BM_PhiloxU64(benchmark::State& state) {
  lrk::CounterRng rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxU64);

void BM_PhiloxNormal(benchmark::State& state) {
  lrk::CounterRng rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormal);

}  // namespace
