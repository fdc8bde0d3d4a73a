#pragma once

#include <array>
#include <span>
#include <vector>

#include "lrk/kinetic_fourier.hpp"
#include "lrk/phase_space.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

struct FractionalModel {
  int dimension = 1;
  double theta = 0.5;
  /// Psi_infinity(q) = -c_theta |q|^theta.
  double c_theta = 0.0;
  /// Constant of the closed form theta Gamma(1-theta) (sphere factor) sigma / (2 pi)^d.
  double closed_form_constant = 0.0;
  /// Standard fractional-Laplacian constant for the same power-law measure.
  double standard_constant = 0.0;
  double ratio_to_closed_form = 0.0;
  std::array<double, 4> probe_q{1.0, 3.0, 10.0, 30.0};
  std::array<double, 4> probe_ratio{};
  double fitted_slope = 0.0;
};

/// eta^{d+theta} sigma(eta p).
double scaled_sigma(const JumpMeasure& jump, double eta, std::span<const double> p);

/// Amplitude C of the limiting measure sigma_inf(p) = C / |p|^{d+theta}.
double sigma_infinity_amplitude(const SpectrumModel& m);

/// Characteristic exponent of sigma_inf at |q|, by graded quadrature on
/// [0, R] with R = 1e3 max(1, 1/|q|) plus analytic tail terms.
double psi_infinity(const SpectrumModel& m, double q_norm);

/// Proportionality constant -Psi_inf(q) / |q|^theta, checked for
/// constancy and exponent before it is returned (ConvergenceError otherwise).
FractionalModel sigma_theta_constant(const JumpMeasure& jump);

/// integral_0^t |a + u b|^theta du, adaptive and split where a + u b = 0.
double fractional_path_integral(double theta, double a, double b, double t);

WignerField solve_fractional(const WignerField& w0, const FractionalModel& frac, double t,
                             const FourierOptions& opts = {}, FlowDiagnostics* diag = nullptr);

struct EtaRow {
  double eta = 0.0;
  double l2_error = 0.0;
  double runtime_seconds = 0.0;
};

struct EtaReport {
  FractionalModel fractional;
  std::vector<EtaRow> rows;
  bool strictly_decreasing = true;
};

/// Relative L2 distance between the eta-scaled kinetic solution and the
/// fractional limit, for each eta (must be decreasing).
EtaReport eta_convergence_report(const WignerField& w0, const SpectrumModel& model, double t,
                                 const std::vector<double>& etas,
                                 const FourierOptions& opts = {});

}  // namespace lrk
