#include <benchmark/benchmark.h>

#include "lrk/field_synthesis.hpp"
#include "lrk/kinetic_fourier.hpp"
#include "lrk/levy_mc.hpp"

namespace {

void BM_SolveFourier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const lrk::PhaseSpaceGrid g{n, n, 8.0 * 3.141592653589793, 8.0 * 3.141592653589793};
  const auto w0 = lrk::make_gaussian(g, 0.0, 0.0, 2.5, 2.5);
  const lrk::JumpMeasure jump{lrk::SpectrumModel{}};
  for (auto _ : state) benchmark::DoNotOptimize(lrk::solve_fourier(w0, jump, 1.0));
}
BENCHMARK(BM_SolveFourier)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_McField(benchmark::State& state) {
  const lrk::PhaseSpaceGrid g{64, 64, 4.0 * 3.141592653589793, 4.0 * 3.141592653589793};
  const auto w0 = lrk::make_gaussian(g, 0.0, 0.0, 1.5, 1.5);
  const lrk::JumpMeasure jump{lrk::SpectrumModel{}};
  for (auto _ : state)
    benchmark::DoNotOptimize(lrk::estimate_field(w0, 1.0, jump, 0.01, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McField)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FieldAdvance(benchmark::State& state) {
  auto f = lrk::init_field(lrk::SpectrumModel{}, static_cast<int>(state.range(0)), 256.0, 3);
  for (auto _ : state) {
    lrk::advance_field(f, 0.1);
    benchmark::DoNotOptimize(lrk::realize_potential(f));
  }
}
BENCHMARK(BM_FieldAdvance)->Arg(1024)->Arg(8192);

}  // namespace
