#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lrk/error.hpp"
#include "lrk/kinetic_fourier.hpp"

using namespace lrk;

namespace {

PhaseSpaceGrid small_grid() { return PhaseSpaceGrid{128, 128, 8.0 * std::numbers::pi, 8.0 * std::numbers::pi}; }

}  // namespace

TEST(Fourier, ZeroTimeIsIdentity) {
  const auto w0 = make_gaussian(small_grid(), 1.0, 0.5, 2.0, 2.0);
  const auto w = solve_fourier(w0, JumpMeasure(SpectrumModel{}), 0.0);
  EXPECT_EQ(w.values, w0.values);
}

TEST(Fourier, FreeTransportMatchesAnalyticShear) {
  const auto g = small_grid();
  const auto w0 = make_gaussian(g, 0.0, 0.5, 2.5, 2.5);
  const double t = 1.3;
  const auto w = free_transport(w0, t);
  // The grid is periodic in x, so the sheared packet wraps around.
  const auto exact = sample_function(g, [&](double x, double k) {
    const double v = (k - 0.5) / 2.5;
    double s = 0.0;
    for (int m = -2; m <= 2; ++m) {
      const double u = (x + 2.0 * m * g.L_x - t * k) / 2.5;
      s += std::exp(-0.5 * (u * u + v * v));
    }
    return s;
  });
  EXPECT_LT(l2_distance(w, exact) / l2_norm(exact), 1e-9);
}

TEST(Fourier, ZeroAmplitudeReducesToFreeTransport) {
  SpectrumModel m;
  m.a0 = 0.0;
  const auto w0 = make_gaussian(small_grid(), 0.0, 0.0, 2.5, 2.5);
  const auto a = solve_fourier(w0, JumpMeasure(m), 1.0);
  const auto b = free_transport(w0, 1.0);
  EXPECT_LT(l2_distance(a, b), 1e-12 * l2_norm(b));
}

TEST(Fourier, OutputIsRealAndNormDecreases) {
  const auto w0 = make_gaussian(small_grid(), 0.0, 0.0, 2.5, 2.5);
  double prev = l2_norm(w0);
  for (double t : {0.5, 1.0, 2.0}) {
    FlowDiagnostics d;
    const auto w = solve_fourier(w0, JumpMeasure(SpectrumModel{}), t, {}, &d);
    EXPECT_LT(d.imaginary_residue, 1e-12);
    EXPECT_LT(l2_norm(w), prev);
    prev = l2_norm(w);
  }
}

TEST(Fourier, DampingOfPureKLine) {
  // W0 independent of x: only the q = 0 column is excited, and there the
  // damping is exactly exp(t Psi(y)).
  const auto g = small_grid();
  const auto w0 = sample_function(g, [](double, double k) { return std::cos(2.0 * k) + 0.5 * std::cos(5.0 * k); });
  const double t = 0.7;
  JumpMeasure j{SpectrumModel{}};
  const auto w = solve_fourier(w0, j, t);
  const auto exact = sample_function(g, [&](double, double k) {
    return std::exp(t * j.psi(2.0)) * std::cos(2.0 * k) + 0.5 * std::exp(t * j.psi(5.0)) * std::cos(5.0 * k);
  });
  EXPECT_LT(l2_distance(w, exact) / l2_norm(exact), 1e-9);
}

TEST(Fourier, AliasingIsDetected) {
  const auto w0 = make_gaussian(PhaseSpaceGrid{64, 64, 8.0, 8.0}, 0.0, 0.0, 0.3, 2.0);
  EXPECT_THROW(solve_fourier(w0, JumpMeasure(SpectrumModel{}), 5.0), AliasingError);
}

TEST(Fourier, TailMassPrecondition) {
  const auto g = small_grid();
  const auto w0 = make_gaussian(g, 0.0, 0.0, 2.5, 2.5);
  EXPECT_THROW(spectral_tail_mass(w0, 10.0 * g.q_nyquist()), PreconditionError);
  EXPECT_GE(spectral_tail_mass(w0, 0.5 * g.q_nyquist()), 0.0);
}
