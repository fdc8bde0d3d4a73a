#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lrk/error.hpp"
#include "lrk/kinetic_fourier.hpp"
#include "lrk/levy_mc.hpp"
#include "lrk/parallel.hpp"

using namespace lrk;

TEST(JumpSampler, RadiusDistributionMatchesRates) {
  JumpMeasure j{SpectrumModel{}};
  const double delta = 0.01;
  JumpSampler s(j, delta);
  EXPECT_NEAR(s.rate(), j.total_rate(delta), 1e-12 * s.rate());
  const int n = 100000;
  const std::vector<double> probes{0.02, 0.05, 0.2, 0.6, 0.9};
  std::vector<int> below(probes.size(), 0);
  CounterRng rng(5, 0);
  for (int i = 0; i < n; ++i) {
    double p;
    s.sample(rng, &p);
    for (std::size_t m = 0; m < probes.size(); ++m) below[m] += std::abs(p) < probes[m];
  }
  for (std::size_t m = 0; m < probes.size(); ++m) {
    const double want = 1.0 - j.total_rate(probes[m]) / j.total_rate(delta);
    const double se = std::sqrt(want * (1.0 - want) / n);
    EXPECT_NEAR(below[m] / double(n), want, 5.0 * se + 1e-4) << "r=" << probes[m];
    EXPECT_NEAR(s.radial_cdf(probes[m]), want, 1e-6);
  }
}

TEST(LevyPath, CharacteristicFunction) {
  JumpMeasure j{SpectrumModel{}};
  JumpSampler s(j, 1e-4);
  const double t = 0.8;
  const int n = 40000;
  for (double y : {1.0, 4.0}) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      CounterRng rng(9, i, StreamDomain::levy_paths);
      acc += std::cos(y * path_endpoint(sample_path(s, t, rng))[0]);
    }
    const double want = std::exp(t * j.psi(y));
    EXPECT_NEAR(acc / n, want, 5.0 / std::sqrt(n)) << "y=" << y;
  }
}

TEST(LevyPath, OccupationIntegralOfHandMadePath) {
  LevyPath p;
  p.horizon = 2.0;
  p.times = {0.5, 1.5};
  p.jumps = {1.0, -3.0};
  EXPECT_DOUBLE_EQ(occupation_integral(p)[0], 1.0 * 1.0 + (-2.0) * 0.5);
  EXPECT_DOUBLE_EQ(path_endpoint(p)[0], -2.0);
}

TEST(McPoint, DeterministicWithoutScattering) {
  SpectrumModel m;
  m.a0 = 0.0;
  auto w0 = [](double x, double k) { return std::exp(-x * x - k * k); };
  const auto e = estimate_point(w0, 0.3, -0.2, 1.5, JumpMeasure(m), 0.01, 1000, 1);
  EXPECT_DOUBLE_EQ(e.mean, w0(0.3 + 1.5 * 0.2, -0.2));
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(McPoint, AgreesWithFourier) {
  PhaseSpaceGrid g{256, 256, 8.0 * std::numbers::pi, 8.0 * std::numbers::pi};
  const auto w0 = make_gaussian(g, 0.0, 0.0, 2.5, 2.5);
  JumpMeasure j{SpectrumModel{}};
  const auto f = solve_fourier(w0, j, 1.0);
  auto w0f = [](double x, double k) { return std::exp(-0.5 * (x * x + k * k) / 6.25); };
  const int ix = 130, ik = 120;
  const auto e = estimate_point(w0f, g.x(ix), g.k(ik), 1.0, j, 1e-3, 20000, 3);
  EXPECT_NEAR(e.mean, f.at(ix, ik), 4.0 * e.std_error + 1e-3);
}

TEST(McPoint, RejectsBadArguments) {
  JumpMeasure j{SpectrumModel{}};
  auto w0 = [](double, double) { return 1.0; };
  EXPECT_THROW(estimate_point(w0, 0, 0, -1.0, j, 0.1, 10, 1), PreconditionError);
  EXPECT_THROW(estimate_point(w0, 0, 0, 1.0, j, 0.0, 10, 1), PreconditionError);
}

TEST(McField, IdenticalAcrossWorkerCounts) {
  PhaseSpaceGrid g{32, 32, 8.0, 8.0};
  const auto w0 = make_gaussian(g, 0.0, 0.0, 2.0, 2.0);
  JumpMeasure j{SpectrumModel{}};
  McOptions o;
  o.block_size = 64;
  set_default_threads(1);
  const auto a = estimate_field(w0, 0.5, j, 0.05, 1000, 17, o);
  set_default_threads(4);
  const auto b = estimate_field(w0, 0.5, j, 0.05, 1000, 17, o);
  EXPECT_EQ(a.mean.values, b.mean.values);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.wrapped_evaluations, b.wrapped_evaluations);
  const auto c = estimate_point(w0, 0.5, 0.5, 0.5, j, 0.05, 1000, 17, o);
  set_default_threads(1);
  const auto d = estimate_point(w0, 0.5, 0.5, 0.5, j, 0.05, 1000, 17, o);
  EXPECT_EQ(c.mean, d.mean);
  EXPECT_EQ(c.std_error, d.std_error);
}
