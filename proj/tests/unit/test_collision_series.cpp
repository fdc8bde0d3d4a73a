#include <gtest/gtest.h>

#include <cmath>

#include "lrk/collision_series.hpp"
#include "lrk/error.hpp"
#include "lrk/levy_mc.hpp"

using namespace lrk;

namespace {

double gaussian(double x, double k) { return std::exp(-0.5 * (x * x + k * k) / 4.0); }

}  // namespace

TEST(PoissonTail, MatchesComplement) {
  for (double s : {0.3, 2.5, 7.0}) {
    for (int n : {0, 1, 3}) {
      double head = 0.0, term = std::exp(-s);
      for (int i = 0; i <= n; ++i) {
        head += term;
        term *= s / (i + 1);
      }
      EXPECT_NEAR(poisson_tail_bound(s, 1.0, n), 1.0 - head, 1e-14);
    }
  }
  EXPECT_EQ(poisson_tail_bound(0.0, 1.0, 2), 0.0);
}

TEST(Series, ZeroOrderIsDampedTransport) {
  JumpMeasure j{SpectrumModel{}};
  SeriesConfig c;
  c.n_max = 0;
  CollisionSeries s(j, c);
  const double t = 0.5, x = 0.3, k = -0.7;
  const auto r = s.evaluate(gaussian, x, k, t, 1.0);
  EXPECT_NEAR(r.value, std::exp(-s.sigma_N() * t) * gaussian(x - t * k, k), 1e-15);
  EXPECT_NEAR(s.sigma_N(), j.total_rate(0.1), 1e-12);
}

TEST(Series, FreeLimitWithoutScattering) {
  SpectrumModel m;
  m.a0 = 0.0;
  CollisionSeries s(JumpMeasure(m), SeriesConfig{});
  const auto r = s.evaluate(gaussian, 1.0, 0.4, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(r.value, gaussian(1.0 - 0.8, 0.4));
  EXPECT_EQ(r.tail_bound, 0.0);
}

TEST(Series, OrientationsDifferByMomentumReflection) {
  CollisionSeries s(JumpMeasure(SpectrumModel{}), SeriesConfig{10, 2, 4, 4});
  auto skew = [](double x, double k) { return std::exp(-0.25 * (x - 1.0) * (x - 1.0) - 0.3 * (k - 0.5) * (k - 0.5)); };
  auto reflected = [&](double x, double k) { return skew(x, -k); };
  const double x = 0.2, k = 0.6, t = 0.4;
  const double a = s.evaluate(skew, x, k, t, 1.0, SeriesOrientation::as_written).value;
  const double b = s.evaluate(reflected, x, -k, t, 1.0, SeriesOrientation::transport).value;
  EXPECT_NEAR(a, b, 1e-14);
  EXPECT_GT(std::abs(a - s.evaluate(skew, x, k, t, 1.0).value), 1e-3);
}

TEST(Series, AgreesWithTruncatedMonteCarlo) {
  JumpMeasure j{SpectrumModel{}};
  CollisionSeries s(j, SeriesConfig{});
  const double t = 0.5;
  for (auto [x, k] : {std::pair{0.0, 0.0}, {1.5, -1.0}}) {
    const auto r = s.evaluate(gaussian, x, k, t, 1.0);
    const auto m = estimate_point(gaussian, x, k, t, j, 0.1, 20000, 7);
    EXPECT_NEAR(r.value, m.mean, 3.0 * m.std_error + r.tail_bound);
    EXPECT_LE(r.value, m.mean + 3.0 * m.std_error);
  }
}

TEST(Series, RejectsBadConfig) {
  JumpMeasure j{SpectrumModel{}};
  EXPECT_THROW(CollisionSeries(j, SeriesConfig{0, 3, 6, 6}), PreconditionError);
  EXPECT_THROW(CollisionSeries(j, SeriesConfig{10, 4, 6, 6}), PreconditionError);
}
