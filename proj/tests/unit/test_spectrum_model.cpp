#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lrk/error.hpp"
#include "lrk/spectrum_model.hpp"

using namespace lrk;

namespace {

constexpr double kPi = std::numbers::pi;

// Psi for the default d = 1 model straight from its definition.
double psi_oracle(const SpectrumModel& m, double q) {
  const double th = m.theta();
  auto sigma = [&](double p) { return 2.0 * m.bump(p) / (2.0 * kPi * m.nu * std::pow(p, 1.0 + th)); };
  auto f = [&](double p) {
    if (p < 1e-200) return 0.0;
    const double s = std::sin(0.5 * p * q);
    return -2.0 * s * s * sigma(p);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double inner = 0.0;
  const int pieces = std::max(1, static_cast<int>(q));
  const double h = 0.5 * m.p_max / pieces;
  for (int i = 0; i < pieces; ++i) inner += ts.integrate(f, i * h, (i + 1) * h, 1e-13);
  const double outer = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.5 * m.p_max, m.p_max, 15, 1e-13);
  return 2.0 * (inner + outer);
}

}  // namespace

TEST(SpectrumModel, DefaultsAreValid) {
  SpectrumModel m;
  EXPECT_TRUE(m.violations().empty());
  EXPECT_DOUBLE_EQ(m.theta(), 0.5);
}

TEST(SpectrumModel, ViolationsNameEveryField) {
  SpectrumModel m;
  m.alpha = 0.4;
  m.nu = -1.0;
  const auto v = m.violations();
  auto has = [&](const std::string& key) {
    for (const auto& s : v)
      if (s.rfind(key, 0) == 0) return true;
    return false;
  };
  EXPECT_TRUE(has("model.alpha"));
  EXPECT_TRUE(has("model.nu"));
  EXPECT_THROW(m.validate(), DomainError);
}

TEST(SpectrumModel, SigmaMatchesFormula) {
  SpectrumModel m;
  for (double p : {0.01, 0.3, 0.49, 0.75, 0.99}) {
    const double want = 2.0 * m.bump(p) / std::pow(p, 2.0 * m.alpha - 1.0) /
                        (2.0 * kPi * m.nu * std::pow(p, 2.0 * m.beta));
    EXPECT_NEAR(eval_sigma(m, std::span<const double>(&p, 1)), want, 1e-14 * want);
  }
  double zero = 0.0, big = 1.5;
  EXPECT_THROW(eval_sigma(m, std::span<const double>(&zero, 1)), DomainError);
  EXPECT_EQ(eval_sigma(m, std::span<const double>(&big, 1)), 0.0);
}

TEST(SpectrumModel, PowerSpectrumAtZeroFrequency) {
  SpectrumModel m;
  double p = 0.2;
  const std::span<const double> s(&p, 1);
  EXPECT_NEAR(eval_power_spectrum(m, 0.0, s), 2.0 * kPi * eval_sigma(m, s), 1e-13);
  EXPECT_NEAR(eval_time_corr(m, 0.0, s), m.r_hat0(s), 1e-14);
  EXPECT_NEAR(eval_time_corr(m, 3.0, s), m.r_hat0(s) * std::exp(-3.0 * m.gap(s)), 1e-14);
}

TEST(SpectrumModel, BumpIsPlateauWithSmoothEdge) {
  SpectrumModel m;
  EXPECT_EQ(m.bump(0.1), m.a0);
  EXPECT_EQ(m.bump(0.5), m.a0);
  EXPECT_EQ(m.bump(1.0), 0.0);
  EXPECT_NEAR(m.bump(0.75), 0.5 * m.a0, 1e-14);
  double prev = m.bump(0.5);
  for (double r = 0.51; r < 1.0; r += 0.01) {
    EXPECT_LE(m.bump(r), prev);
    prev = m.bump(r);
  }
}

TEST(Psi, MatchesDirectQuadrature) {
  SpectrumModel m;
  JumpMeasure j(m);
  for (double q : {0.1, 1.0, 3.0, 10.0, 40.0}) {
    const double want = psi_oracle(m, q);
    EXPECT_NEAR(j.psi(q), want, 1e-9 * std::abs(want)) << "q=" << q;
  }
}

TEST(Psi, NonpositiveEvenAndZeroAtOrigin) {
  JumpMeasure j{SpectrumModel{}};
  EXPECT_EQ(j.psi(0.0), 0.0);
  for (double q : {0.5, 2.0, 7.0}) {
    EXPECT_LT(j.psi(q), 0.0);
    EXPECT_DOUBLE_EQ(j.psi(q), j.psi(-q));
  }
}

TEST(Psi, ScalingIdentity) {
  SpectrumModel m;
  const double eta = 0.25;
  JumpMeasure base(m), scaled(m, eta);
  for (double q : {0.5, 2.0}) {
    const double want = std::pow(eta, m.theta()) * base.psi(q / eta);
    EXPECT_NEAR(scaled.psi(q), want, 1e-10 * std::abs(want));
  }
}

TEST(Psi, GrowthExponentFromIncrements) {
  // -Psi(q) ~ C q^theta + const for large q; successive increments over a
  // geometric ladder decay like the ratio^theta.
  JumpMeasure j{SpectrumModel{}};
  const double r = 4.0;
  const double d1 = j.psi(100.0) - j.psi(400.0);
  const double d2 = j.psi(400.0) - j.psi(1600.0);
  EXPECT_NEAR(std::log(d2 / d1) / std::log(r), 0.5, 0.02);
}

TEST(Psi, PathIntegralAgreesWithTable) {
  JumpMeasure j{SpectrumModel{}};
  PsiTable table(j, 40.0);
  for (auto [q, y, t] : {std::tuple{1.0, 2.0, 1.0}, {-3.0, 1.5, 2.0}, {0.5, 0.0, 1.0}}) {
    const double a = psi_path_integral(j, q, y, t);
    EXPECT_NEAR(table.path_integral(q, y, t), a, 1e-8 * std::abs(a));
  }
}

TEST(TotalRate, DifferencesMatchPowerLaw) {
  SpectrumModel m;
  JumpMeasure j(m);
  // Below p_max / 2 the density is (1/pi) p^{-3/2} on each side.
  for (auto [d1, d2] : {std::pair{0.01, 0.1}, {0.001, 0.3}}) {
    const double want = (2.0 / kPi) * 2.0 * (1.0 / std::sqrt(d1) - 1.0 / std::sqrt(d2));
    EXPECT_NEAR(j.total_rate(d1) - j.total_rate(d2), want, 1e-9 * want);
  }
  EXPECT_GT(j.total_rate(1e-6), j.total_rate(1e-4));
  EXPECT_EQ(j.total_rate(2.0), 0.0);
}

TEST(Decorrelation, DefaultModelIsLongRange) {
  const auto rep = classify_decorrelation(SpectrumModel{});
  EXPECT_EQ(rep.status, DecorrelationClass::long_range);
  EXPECT_NEAR(rep.fitted_exponent, 0.5, 0.05);
  EXPECT_TRUE(rep.matches_prediction);
}

TEST(Decorrelation, IntegrableDensityIsShortRange) {
  const auto rep = classify_radial_density([](double r) { return std::sqrt(r); }, 1.0, 0.5);
  EXPECT_EQ(rep.status, DecorrelationClass::short_range);
}

TEST(Regularity, IntegralsAgreeForUnitGap) {
  SpectrumModel m;  // beta = 1/2, nu = 1: |p|^k / g^k = 1
  const auto r = regularity_integrals(m);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double plateau = ts.integrate([](double p) { return 1.0 / std::sqrt(p); }, 0.0, 0.5);
  const double edge = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double p) { return m.bump(p) / std::sqrt(p); }, 0.5, 1.0, 15, 1e-14);
  const double want = 2.0 * (plateau + edge);
  for (double v : r.values) EXPECT_NEAR(v, want, 1e-8 * want);
  EXPECT_LT(r.max_relative_gap, 1e-6);
}
