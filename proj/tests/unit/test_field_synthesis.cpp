#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "lrk/error.hpp"
#include "lrk/field_synthesis.hpp"

using namespace lrk;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FieldState small_field(std::uint64_t seed) { return init_field(SpectrumModel{}, 64, 16.0, seed); }

}  // namespace

TEST(Field, ZeroAmplitudeGivesZeroPotential) {
  SpectrumModel m;
  m.a0 = 0.0;
  auto f = init_field(m, 64, 16.0, 3);
  advance_field(f, 0.5);
  for (double v : realize_potential(f)) EXPECT_EQ(v, 0.0);
}

TEST(Field, CoarseGridRejected) {
  EXPECT_THROW(init_field(SpectrumModel{}, 8, 64.0, 1), PreconditionError);
}

TEST(Field, RealizationIsReal) {
  auto f = small_field(4);
  double residue = 1.0;
  realize_potential(f, &residue);
  EXPECT_LT(residue, 1e-12);
}

TEST(Field, SingleModeIsCosine) {
  auto f = small_field(1);
  std::fill(f.modes.begin(), f.modes.end(), cplx(0.0));
  const int j = 5;
  const cplx c(0.7, -0.4);
  f.modes[j] = c;
  const auto v = realize_potential(f);
  for (int i = 0; i < f.n; ++i) {
    const double want = 2.0 * (c * std::polar(1.0, f.wavenumber(j) * f.x(i))).real() / kTwoPi;
    EXPECT_NEAR(v[i], want, 1e-14);
  }
}

TEST(Field, Parseval) {
  auto f = small_field(8);
  const auto v = realize_potential(f);
  double ms = 0.0;
  for (double x : v) ms += x * x;
  ms /= f.n;
  double modes = std::norm(f.modes[0]) + std::norm(f.modes[f.n / 2]);
  for (int j = 1; j < f.n / 2; ++j) modes += 2.0 * std::norm(f.modes[j]);
  EXPECT_NEAR(ms, modes / (kTwoPi * kTwoPi), 1e-10 * ms);
}

TEST(Field, ZeroCellIsFrozen) {
  auto f = small_field(2);
  const cplx m0 = f.modes[0];
  EXPECT_EQ(f.gap[0], 0.0);
  EXPECT_GT(f.variance[0], 0.0);
  advance_field(f, 3.0);
  EXPECT_EQ(f.modes[0], m0);
}

TEST(Field, ZeroCellVarianceIsCellIntegral) {
  // R0 = p^{-1/2} on the plateau; the cell [-h, h] holds 4 sqrt(h).
  auto f = small_field(2);
  const double h = 0.5 * f.dp();
  EXPECT_NEAR(f.variance[0], kTwoPi * 4.0 * std::sqrt(h), 1e-8 * f.variance[0]);
}

TEST(Field, EnsembleMeanAndVariance) {
  const int n = 10000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int r = 0; r < n; ++r) {
    const double v = realize_potential(small_field(1000 + r))[7];
    s1 += v;
    s2 += v * v;
    s4 += v * v * v * v;
  }
  const double mean = s1 / n, var = s2 / n;
  const double want = potential_variance(small_field(0));
  EXPECT_NEAR(mean, 0.0, 3.0 * std::sqrt(var / n));
  const double se = std::sqrt((s4 / n - var * var) / n);
  EXPECT_NEAR(var, want, 3.0 * se);
}

TEST(Field, ConditionalMeanFactor) {
  const FieldState base = small_field(77);
  const int j = 3;
  const double dt = 0.8;
  const int n = 10000;
  cplx acc(0.0);
  for (int r = 0; r < n; ++r) {
    FieldState f = base;
    f.seed = 5000 + r;
    advance_field(f, dt);
    acc += f.modes[j] / base.modes[j];
  }
  const double a = std::exp(-base.gap[j] * dt);
  const double se = std::sqrt(0.5 * base.variance[j] * (1.0 - a * a) / n) / std::abs(base.modes[j]);
  EXPECT_NEAR((acc / double(n)).real(), a, 3.0 * se);
  EXPECT_NEAR((acc / double(n)).imag(), 0.0, 3.0 * se);
}

TEST(Field, TwoTimeCovariance) {
  const int n = 10000;
  const double s = 0.7;
  double acc = 0.0, acc2 = 0.0;
  for (int r = 0; r < n; ++r) {
    FieldState f = small_field(20000 + r);
    const double v0 = realize_potential(f)[11];
    advance_field(f, s);
    const double prod = v0 * realize_potential(f)[11];
    acc += prod;
    acc2 += prod * prod;
  }
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, potential_covariance(small_field(0), s), 3.0 * se);
}

TEST(Field, StationaryModeVariance) {
  const int n = 10000, steps = 100, j = 2;
  double first = 0.0, last = 0.0, last4 = 0.0;
  for (int r = 0; r < n; ++r) {
    FieldState f = small_field(40000 + r);
    first += std::norm(f.modes[j]);
    for (int s = 0; s < steps; ++s) advance_field(f, 0.05);
    const double e = std::norm(f.modes[j]);
    last += e;
    last4 += e * e;
  }
  const double v = small_field(0).variance[j];
  const double se = std::sqrt((last4 / n - (last / n) * (last / n)) / n);
  EXPECT_NEAR(first / n, v, 3.0 * se);
  EXPECT_NEAR(last / n, v, 3.0 * se);
}

TEST(Field, DeterministicTrajectories) {
  auto a = small_field(9), b = small_field(9);
  for (int s = 0; s < 5; ++s) {
    advance_field(a, 0.3);
    advance_field(b, 0.3);
  }
  EXPECT_EQ(a.modes, b.modes);
  EXPECT_EQ(realize_potential(a), realize_potential(b));
}
