#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lrk/fractional_limit.hpp"

using namespace lrk;

namespace {

constexpr double kPi = std::numbers::pi;

// -Psi(q) = C |q|^theta * 2 Gamma(1 - theta) cos(pi theta / 2) / theta for
// the one dimensional measure C / |p|^{1 + theta}.
double one_d_constant(double C, double theta) {
  return C * 2.0 * std::tgamma(1.0 - theta) * std::cos(0.5 * kPi * theta) / theta;
}

}  // namespace

TEST(Fractional, ConstantMatchesStableLawFormula) {
  SpectrumModel m;
  const auto fm = sigma_theta_constant(JumpMeasure(m));
  const double C = 2.0 * m.a0 / m.nu / (2.0 * kPi);
  EXPECT_NEAR(fm.c_theta, one_d_constant(C, 0.5), 1e-6 * fm.c_theta);
  EXPECT_NEAR(fm.fitted_slope, 0.5, 1e-6);
  for (double r : fm.probe_ratio) EXPECT_NEAR(r, fm.c_theta, 1e-6 * fm.c_theta);
  EXPECT_NEAR(fm.standard_constant, fm.c_theta, 1e-6 * fm.c_theta);
  EXPECT_GT(fm.closed_form_constant, 0.0);
  EXPECT_NEAR(fm.ratio_to_closed_form, fm.c_theta / fm.closed_form_constant, 1e-12);
}

TEST(Fractional, OtherThetaAndDimensions) {
  SpectrumModel m;
  m.alpha = 0.9;
  m.beta = 0.4;  // theta = 0.6
  const auto fm = sigma_theta_constant(JumpMeasure(m));
  const double C = 2.0 * m.a0 / m.nu / (2.0 * kPi);
  EXPECT_NEAR(fm.c_theta, one_d_constant(C, 0.6), 1e-6 * fm.c_theta);
  for (int d : {2, 3}) {
    SpectrumModel md;
    md.dimension = d;
    const auto f = sigma_theta_constant(JumpMeasure(md));
    EXPECT_NEAR(f.c_theta, f.standard_constant, 1e-6 * f.c_theta) << "d=" << d;
  }
}

TEST(Fractional, PsiInfinityIsHomogeneous) {
  SpectrumModel m;
  const double a = psi_infinity(m, 2.0), b = psi_infinity(m, 8.0);
  EXPECT_NEAR(b / a, std::pow(4.0, m.theta()), 1e-9);
  EXPECT_EQ(psi_infinity(m, 0.0), 0.0);
}

TEST(Fractional, ScaledSigma) {
  JumpMeasure j{SpectrumModel{}};
  double p = 0.3;
  const double eta = 0.5;
  double q = eta * p;
  EXPECT_NEAR(scaled_sigma(j, eta, std::span<const double>(&p, 1)),
              std::pow(eta, 1.5) * j.sigma(std::span<const double>(&q, 1)), 1e-14);
}

TEST(Fractional, PathIntegralClosedForm) {
  const double th = 0.5;
  auto F = [&](double z) { return std::copysign(std::pow(std::abs(z), th + 1.0), z) / (th + 1.0); };
  for (auto [a, b, t] : {std::tuple{1.0, 2.0, 1.5}, {-2.0, 3.0, 1.0}, {0.5, -1.0, 2.0}}) {
    const double want = (F(a + t * b) - F(a)) / b;
    EXPECT_NEAR(fractional_path_integral(th, a, b, t), want, 1e-9 * std::abs(want));
  }
  EXPECT_NEAR(fractional_path_integral(th, 4.0, 0.0, 2.0), 4.0, 1e-14);
}

TEST(Fractional, SpectralLineDecay) {
  PhaseSpaceGrid g{64, 64, 8.0 * kPi, 8.0 * kPi};
  const auto w0 = sample_function(g, [](double, double k) { return std::cos(3.0 * k); });
  const auto fm = sigma_theta_constant(JumpMeasure(SpectrumModel{}));
  const auto w = solve_fractional(w0, fm, 0.8);
  const double want = std::exp(-0.8 * fm.c_theta * std::pow(3.0, fm.theta));
  EXPECT_NEAR(w.at(7, 13) / w0.at(7, 13), want, 1e-9);
}
