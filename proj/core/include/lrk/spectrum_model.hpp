#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "lrk/chebyshev.hpp"

namespace lrk {

/// Statistics of the random medium: the spatial spectrum
/// R0(p) = a(p) / |p|^{d+2 alpha-2} and the spectral gap g(p) = nu |p|^{2 beta}.
struct SpectrumModel {
  int dimension = 1;
  double a0 = 1.0;
  double alpha = 0.75;
  double beta = 0.5;
  double nu = 1.0;
  double p_max = 1.0;
  /// Optional direction factor for d == 2, a function of the polar angle.
  /// Multiplies the radial bump; must be nonnegative and even under
  /// phi -> phi + pi. Empty means isotropic.
  std::function<double(double)> angular;

  /// All violated constraints, one message per field ("model.alpha: ...").
  std::vector<std::string> violations() const;
  /// Throws DomainError listing every violation.
  void validate() const;

  double theta() const noexcept { return 2.0 * (alpha + beta - 1.0); }
  double sigma_amp() const noexcept { return a0 / nu; }

  /// Radial plateau profile: a0 on [0, p_max/2], C-infinity decay to 0 at p_max.
  double bump(double r) const noexcept;
  double angular_factor(std::span<const double> p) const;
  /// Integral of the direction factor over the unit sphere.
  double angular_mass() const;

  double r_hat0(std::span<const double> p) const;
  double gap(std::span<const double> p) const;
};

double sphere_area(int d);

/// 2 R0(p) / ((2 pi)^d g(p)); zero outside |p| < p_max; DomainError at p = 0.
double eval_sigma(const SpectrumModel& m, std::span<const double> p);
double eval_power_spectrum(const SpectrumModel& m, double omega, std::span<const double> p);
double eval_time_corr(const SpectrumModel& m, double t, std::span<const double> p);

enum class DecorrelationClass { long_range, short_range, inconclusive };

struct DecorrelationReport {
  DecorrelationClass status = DecorrelationClass::inconclusive;
  double fitted_exponent = 0.0;
  double predicted_theta = 0.0;
  bool matches_prediction = false;
  std::vector<double> shell_radii;
  std::vector<double> shell_sums;
};

DecorrelationReport classify_decorrelation(const SpectrumModel& m);
/// Same analysis for an arbitrary radial density f(r) (already including
/// the r^{d-1} sphere factor) on (0, r_max].
DecorrelationReport classify_radial_density(const std::function<double(double)>& f,
                                            double r_max, double predicted_theta);

struct RegularityIntegrals {
  std::array<double, 3> values{};
  std::array<double, 3> refined{};
  double max_relative_gap = 0.0;
};

/// Integrals of R0 |p|^k / g^k for k = 1, 2, 3, on two mesh refinements.
/// ConvergenceError if the refinements disagree beyond 1e-6 relative.
RegularityIntegrals regularity_integrals(const SpectrumModel& m);

/// Jump measure sigma of the limiting Levy process, optionally in the
/// scaled form sigma^eta(p) = eta^{d+theta} sigma(eta p).
class JumpMeasure {
 public:
  explicit JumpMeasure(SpectrumModel model, double eta = 1.0);

  const SpectrumModel& model() const noexcept { return model_; }
  int dimension() const noexcept { return model_.dimension; }
  double theta() const noexcept { return model_.theta(); }
  double sigma_amp() const noexcept { return model_.sigma_amp(); }
  double eta() const noexcept { return eta_; }
  /// Radius beyond which sigma vanishes (p_max / eta).
  double support() const noexcept { return model_.p_max / eta_; }
  bool is_zero() const noexcept { return model_.a0 == 0.0; }
  /// Copy that integrates with a finer mesh and higher order; used to
  /// check the quadrature against itself.
  JumpMeasure refined() const;

  double sigma(std::span<const double> p) const;
  /// Isotropic radial part of sigma (direction factor excluded).
  double sigma_radial(double r) const noexcept;

  /// Psi(q) = integral of sigma(p) (cos(p.q) - 1) dp.
  double psi(std::span<const double> q) const;
  double psi(double q) const { return psi(std::span<const double>(&q, 1)); }

  /// integral over |p| > delta of sigma; cached per delta.
  double total_rate(double delta) const;
  /// integral over |p| > delta of |p|^2 sigma.
  double second_moment(double delta) const;

 private:
  SpectrumModel model_;
  double eta_;
  int refinement_ = 0;
  struct Cache {
    std::mutex mutex;
    std::map<double, double> rates;
  };
  std::shared_ptr<Cache> cache_;
};

/// integral_0^t Psi(q + u y) du by adaptive quadrature in u.
double psi_path_integral(const JumpMeasure& jump, std::span<const double> q,
                         std::span<const double> y, double t);
double psi_path_integral(const JumpMeasure& jump, double q, double y, double t);

/// One dimensional Psi tabulated on [0, q_max] by Chebyshev panels, with
/// the path integral taken from the exact antiderivative of the table.
class PsiTable {
 public:
  PsiTable(const JumpMeasure& jump, double q_max);
  double q_max() const noexcept { return table_.upper(); }
  double psi(double q) const;
  /// integral_0^t Psi(q + u y) du.
  double path_integral(double q, double y, double t) const;

 private:
  double antiderivative(double q) const;
  PiecewiseChebyshev table_;
};

}  // namespace lrk
