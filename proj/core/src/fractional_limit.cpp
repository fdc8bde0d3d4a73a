#include "lrk/fractional_limit.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "lrk/error.hpp"
#include "lrk/quadrature.hpp"

namespace lrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// K_d(z) - 1 where K_d is the angular average of cos on the sphere.
double kernel_minus_one(int d, double z) {
  if (d == 1) {
    const double s = std::sin(0.5 * z);
    return -2.0 * s * s;
  }
  if (z < 1e-3) {
    const double z2 = z * z;
    return d == 2 ? -z2 / 4.0 + z2 * z2 / 64.0 : -z2 / 6.0 + z2 * z2 / 120.0;
  }
  if (d == 2) return boost::math::cyl_bessel_j(0, z) - 1.0;
  return std::sin(z) / z - 1.0;
}

}  // namespace

double scaled_sigma(const JumpMeasure& jump, double eta, std::span<const double> p) {
  return JumpMeasure(jump.model(), eta * jump.eta()).sigma(p);
}

double sigma_infinity_amplitude(const SpectrumModel& m) {
  return 2.0 * m.sigma_amp() / std::pow(kTwoPi, m.dimension);
}

double psi_infinity(const SpectrumModel& m, double q_norm) {
  const double q = std::abs(q_norm);
  if (q == 0.0) return 0.0;
  const int d = m.dimension;
  const double theta = m.theta();
  const double C = sigma_infinity_amplitude(m);
  const double R = 1e3 * std::max(1.0, 1.0 / q);

  quad::RadialOptions opts;
  opts.min_subintervals = 8;
  opts.frequency = q;
  opts.levels = 60;
  auto f = [&](double r) { return -kernel_minus_one(d, r * q) * std::pow(r, -1.0 - theta); };
  const double body = quad::radial(f, 0.0, R, opts);

  // Tail of the oscillating part by two integrations by parts.
  double oscillating_tail = 0.0;
  if (d == 1) {
    const double a = 1.0 + theta;
    oscillating_tail = -std::pow(R, -a) * std::sin(q * R) / q +
                       a * std::pow(R, -a - 1.0) * std::cos(q * R) / (q * q);
  } else if (d == 3) {
    const double a = 2.0 + theta;
    oscillating_tail = (std::pow(R, -a) * std::cos(q * R) / q +
                        a * std::pow(R, -a - 1.0) * std::sin(q * R) / (q * q)) /
                       q;
  }
  const double constant_tail = std::pow(R, -theta) / theta;
  return -sphere_area(d) * C * (body - oscillating_tail + constant_tail);
}

FractionalModel sigma_theta_constant(const JumpMeasure& jump) {
  const auto& m = jump.model();
  FractionalModel fm;
  fm.dimension = m.dimension;
  fm.theta = m.theta();
  const double theta = fm.theta;
  const int d = m.dimension;

  std::array<double, 4> logs_q{}, logs_psi{};
  double mean = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double q = fm.probe_q[i];
    const double psi = psi_infinity(m, q);
    fm.probe_ratio[i] = -psi / std::pow(q, theta);
    mean += fm.probe_ratio[i] / 4.0;
    logs_q[i] = std::log(q);
    logs_psi[i] = std::log(-psi);
  }
  fm.c_theta = mean;

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < 4; ++i) {
    mx += logs_q[i] / 4.0;
    my += logs_psi[i] / 4.0;
  }
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (logs_q[i] - mx) * (logs_psi[i] - my);
    sxx += (logs_q[i] - mx) * (logs_q[i] - mx);
  }
  fm.fitted_slope = sxy / sxx;

  const double sphere_factor = 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) *
                               std::tgamma(0.5 * (theta + 1.0)) / std::tgamma(0.5 * (d + theta));
  fm.closed_form_constant =
      m.sigma_amp() * theta * std::tgamma(1.0 - theta) * sphere_factor / std::pow(kTwoPi, d);
  fm.standard_constant = sigma_infinity_amplitude(m) * std::pow(std::numbers::pi, 0.5 * d) *
                         std::abs(std::tgamma(-0.5 * theta)) /
                         (std::pow(2.0, theta) * std::tgamma(0.5 * (d + theta)));
  fm.ratio_to_closed_form = fm.closed_form_constant > 0.0 ? fm.c_theta / fm.closed_form_constant : 0.0;

  if (m.a0 == 0.0) return fm;
  double spread = 0.0;
  for (double r : fm.probe_ratio) spread = std::max(spread, std::abs(r - mean) / mean);
  if (spread > 0.005 || std::abs(fm.fitted_slope - theta) > 0.005 * theta) {
    std::ostringstream os;
    os << "fractional constant is not a constant: relative spread " << spread
       << ", fitted exponent " << fm.fitted_slope << " vs theta " << theta;
    throw ConvergenceError(os.str());
  }
  return fm;
}

double fractional_path_integral(double theta, double a, double b, double t) {
  if (t < 0.0) throw PreconditionError("fractional_path_integral: t must be nonnegative");
  if (t == 0.0) return 0.0;
  if (b == 0.0) return t * std::pow(std::abs(a), theta);
  auto f = [&](double u) { return std::pow(std::abs(a + u * b), theta); };
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  auto piece = [&](double lo, double hi) { return integrator.integrate(f, lo, hi, 1e-10); };
  const double u_star = -a / b;
  if (u_star > 0.0 && u_star < t) return piece(0.0, u_star) + piece(u_star, t);
  return piece(0.0, t);
}

WignerField solve_fractional(const WignerField& w0, const FractionalModel& frac, double t,
                             const FourierOptions& opts, FlowDiagnostics* diag) {
  if (frac.dimension != 1) throw PreconditionError("solve_fractional: only dimension 1 is supported");
  if (frac.c_theta < 0.0) throw PreconditionError("solve_fractional: c_theta must be nonnegative");
  if (t == 0.0 || frac.c_theta == 0.0) return spectral_flow(w0, t, {}, opts, diag);
  auto damping = [&](double q, double y) {
    return std::exp(-frac.c_theta * fractional_path_integral(frac.theta, y, q, t));
  };
  return spectral_flow(w0, t, damping, opts, diag);
}

EtaReport eta_convergence_report(const WignerField& w0, const SpectrumModel& model, double t,
                                 const std::vector<double>& etas, const FourierOptions& opts) {
  for (std::size_t i = 1; i < etas.size(); ++i)
    if (!(etas[i] < etas[i - 1]))
      throw PreconditionError("eta_convergence_report: etas must be strictly decreasing");
  EtaReport rep;
  const JumpMeasure base(model);
  rep.fractional = sigma_theta_constant(base);
  const WignerField limit = solve_fractional(w0, rep.fractional, t, opts);
  const double scale = l2_norm(w0);
  for (double eta : etas) {
    const auto start = std::chrono::steady_clock::now();
    const WignerField w = solve_fourier(w0, JumpMeasure(model, eta), t, opts);
    EtaRow row;
    row.eta = eta;
    row.l2_error = scale > 0.0 ? l2_distance(w, limit) / scale : 0.0;
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!rep.rows.empty() && !(row.l2_error < rep.rows.back().l2_error))
      rep.strictly_decreasing = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace lrk
