#include <benchmark/benchmark.h>

#include "lrk/spectrum_model.hpp"

namespace {

void BM_PsiDirect(benchmark::State& state) {
  const lrk::JumpMeasure jump{lrk::SpectrumModel{}};
  double q = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jump.psi(q));
    q = q < 30.0 ? q * 1.1 : 0.1;
  }
}
BENCHMARK(BM_PsiDirect);

void BM_PsiTableBuild(benchmark::State& state) {
  const lrk::JumpMeasure jump{lrk::SpectrumModel{}};
  for (auto _ : state) benchmark::DoNotOptimize(lrk::PsiTable(jump, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_PsiTableBuild)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PsiTablePathIntegral(benchmark::State& state) {
  const lrk::JumpMeasure jump{lrk::SpectrumModel{}};
  const lrk::PsiTable table(jump, 64.0);
  double q = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.path_integral(q, 3.0, 1.0));
    q = q < 10.0 ? q + 0.37 : -10.0;
  }
}
BENCHMARK(BM_PsiTablePathIntegral);

}  // namespace
