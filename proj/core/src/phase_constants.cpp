#include "lrk/phase_constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lrk/error.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

PhaseScaling compute_scaling(double alpha, double beta, double gamma, double a0, double nu,
                             int d) {
  SpectrumModel m;
  m.dimension = d;
  m.alpha = alpha;
  m.beta = beta;
  m.a0 = a0;
  m.nu = nu;
  std::vector<std::string> bad = m.violations();
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "run.gamma: must lie in the open interval (0, 1), got " << gamma;
    bad.push_back(os.str());
  }
  if (!bad.empty()) {
    std::string msg = "compute_scaling:";
    for (const auto& s : bad) msg += "\n  " + s;
    throw DomainError(msg);
  }

  PhaseScaling out;
  out.kappa0 = (alpha + 2.0 * beta - 1.0) / (2.0 * beta);
  const double denom = 1.0 - gamma * (alpha + beta - 1.0) / beta;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "compute_scaling: 1 - gamma (alpha + beta - 1) / beta = " << denom
       << " is not positive; gamma is too large for these alpha, beta";
    throw DomainError(os.str());
  }
  out.kappa_gamma = out.kappa0 / denom;
  out.omega_d = sphere_area(d);

  auto f = [&](double rho) {
    return std::exp(-nu * std::pow(rho, 2.0 * beta)) * std::pow(rho, 1.0 - 2.0 * alpha);
  };
  boost::math::quadrature::tanh_sinh<double> near;
  boost::math::quadrature::exp_sinh<double> far;
  out.rho_integral = near.integrate(f, 0.0, 1.0, 1e-12) + far.integrate(f, 1.0, INFINITY, 1e-12);

  const double k = out.kappa_gamma;
  out.D = a0 * out.omega_d / (std::pow(2.0 * std::numbers::pi, d) * k * (2.0 * k - 1.0)) *
          out.rho_integral;
  return out;
}

}  // namespace lrk
