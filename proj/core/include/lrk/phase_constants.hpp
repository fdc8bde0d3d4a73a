#pragma once

namespace lrk {

struct PhaseScaling {
  double kappa0 = 0.0;
  double kappa_gamma = 0.0;
  double D = 0.0;
  double omega_d = 0.0;
  /// integral_0^inf e^{-nu rho^{2 beta}} rho^{1 - 2 alpha} d rho.
  double rho_integral = 0.0;
};

/// Scaling exponents and variance constant of the phase evolution.
/// DomainError when the parameters are outside their admissible ranges or
/// gamma is too large for kappa_gamma to be defined.
PhaseScaling compute_scaling(double alpha, double beta, double gamma, double a0, double nu,
                             int d);

}  // namespace lrk
