#include "lrk/spectrum_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "lrk/error.hpp"
#include "lrk/quadrature.hpp"

namespace lrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

double smooth_edge(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

void check_point(const SpectrumModel& m, std::span<const double> p, const char* what) {
  if (static_cast<int>(p.size()) != m.dimension)
    throw PreconditionError(std::string(what) + ": vector dimension does not match the model");
  if (norm(p) == 0.0)
    throw DomainError(std::string(what) + ": undefined at p = 0");
}

quad::RadialOptions radial_options(int refinement, double frequency) {
  quad::RadialOptions o;
  o.order = refinement ? 30 : 20;
  o.min_subintervals = refinement ? 16 : 8;
  o.frequency = frequency;
  return o;
}

// 1 - J0(z), series below 1e-3 to avoid cancellation.
double one_minus_j0(double z) {
  if (z < 1e-3) {
    const double z2 = z * z;
    return z2 / 4.0 - z2 * z2 / 64.0;
  }
  return 1.0 - boost::math::cyl_bessel_j(0, z);
}

// 1 - sin(z)/z.
double one_minus_sinc(double z) {
  if (z < 1e-3) {
    const double z2 = z * z;
    return z2 / 6.0 - z2 * z2 / 120.0;
  }
  return 1.0 - std::sin(z) / z;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::vector<std::string> SpectrumModel::violations() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& key, const std::string& rule, double value) {
    std::ostringstream os;
    os.precision(17);
    os << "model." << key << ": " << rule << ", got " << value;
    out.push_back(os.str());
  };
  if (dimension < 1 || dimension > 3) add("dimension", "must be 1, 2 or 3", dimension);
  if (!(alpha > 0.5 && alpha < 1.0)) add("alpha", "must lie in the open interval (1/2, 1)", alpha);
  if (!(beta > 0.0 && beta <= 0.5)) add("beta", "must lie in (0, 1/2]", beta);
  if (!(alpha + beta > 1.0 && alpha + beta < 1.5))
    add("alpha+beta", "must lie in the open interval (1, 3/2)", alpha + beta);
  if (!(nu > 0.0)) add("nu", "must be positive", nu);
  if (!(a0 >= 0.0) || !std::isfinite(a0)) add("a0", "must be finite and nonnegative", a0);
  if (!(p_max > 0.0) || !std::isfinite(p_max)) add("p_max", "must be finite and positive", p_max);
  if (angular && dimension != 2)
    add("angular", "a direction factor is only supported for dimension 2", dimension);
  return out;
}

void SpectrumModel::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid spectrum model:";
  for (const auto& s : v) msg += "\n  " + s;
  throw DomainError(msg);
}

double SpectrumModel::bump(double r) const noexcept {
  const double half = 0.5 * p_max;
  if (r <= half) return a0;
  if (r >= p_max) return 0.0;
  const double s = (r - half) / half;
  const double up = smooth_edge(1.0 - s);
  return a0 * up / (smooth_edge(s) + up);
}

double SpectrumModel::angular_factor(std::span<const double> p) const {
  if (!angular) return 1.0;
  return angular(std::atan2(p[1], p[0]));
}

double SpectrumModel::angular_mass() const {
  if (!angular) return sphere_area(dimension);
  constexpr int n = 256;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += angular(kTwoPi * i / n);
  return s * kTwoPi / n;
}

double SpectrumModel::r_hat0(std::span<const double> p) const {
  check_point(*this, p, "r_hat0");
  const double r = norm(p);
  if (r >= p_max) return 0.0;
  return bump(r) * angular_factor(p) / std::pow(r, dimension + 2.0 * alpha - 2.0);
}

double SpectrumModel::gap(std::span<const double> p) const {
  return nu * std::pow(norm(p), 2.0 * beta);
}

double eval_sigma(const SpectrumModel& m, std::span<const double> p) {
  check_point(m, p, "eval_sigma");
  return 2.0 * m.r_hat0(p) / (std::pow(kTwoPi, m.dimension) * m.gap(p));
}

double eval_power_spectrum(const SpectrumModel& m, double omega, std::span<const double> p) {
  check_point(m, p, "eval_power_spectrum");
  if (omega == 0.0) return std::pow(kTwoPi, m.dimension) * eval_sigma(m, p);
  const double g = m.gap(p);
  return 2.0 * g * m.r_hat0(p) / (omega * omega + g * g);
}

double eval_time_corr(const SpectrumModel& m, double t, std::span<const double> p) {
  check_point(m, p, "eval_time_corr");
  return std::exp(-m.gap(p) * std::abs(t)) * m.r_hat0(p);
}

DecorrelationReport classify_radial_density(const std::function<double(double)>& f,
                                            double r_max, double predicted_theta) {
  DecorrelationReport rep;
  rep.predicted_theta = predicted_theta;
  const auto& rule = quad::gauss_legendre(20);
  constexpr int levels = 30;
  constexpr int fit_from = 10;
  std::vector<double> lx, ly;
  double total = 0.0;
  double hi = r_max;
  for (int n = 1; n <= levels; ++n) {
    const double lo = 0.5 * hi;
    double inc = 0.0;
    const double h = (hi - lo) / 8.0;
    for (int i = 0; i < 8; ++i) inc += quad::gauss(f, lo + i * h, lo + (i + 1) * h, rule);
    total += inc;
    rep.shell_radii.push_back(lo);
    rep.shell_sums.push_back(total);
    if (n >= fit_from && inc > 0.0) {
      lx.push_back(-std::log(lo));
      ly.push_back(std::log(inc));
    }
    hi = lo;
  }
  if (lx.size() < 3) {
    rep.status = DecorrelationClass::inconclusive;
    return rep;
  }
  rep.fitted_exponent = least_squares_slope(lx, ly);
  constexpr double noise = 0.02;
  if (rep.fitted_exponent > noise)
    rep.status = DecorrelationClass::long_range;
  else if (rep.fitted_exponent < -noise)
    rep.status = DecorrelationClass::short_range;
  else
    rep.status = DecorrelationClass::inconclusive;
  rep.matches_prediction =
      std::abs(rep.fitted_exponent - predicted_theta) <= 0.1 * std::abs(predicted_theta);
  return rep;
}

DecorrelationReport classify_decorrelation(const SpectrumModel& m) {
  m.validate();
  const double mass = m.angular_mass();
  const int d = m.dimension;
  auto f = [&](double r) {
    return mass * std::pow(r, d - 1) * m.bump(r) /
           (std::pow(r, d + 2.0 * m.alpha - 2.0) * m.nu * std::pow(r, 2.0 * m.beta));
  };
  return classify_radial_density(f, m.p_max, m.theta());
}

RegularityIntegrals regularity_integrals(const SpectrumModel& m) {
  m.validate();
  RegularityIntegrals out;
  const double mass = m.angular_mass();
  const int d = m.dimension;
  for (int k = 1; k <= 3; ++k) {
    auto f = [&](double r) {
      const double ratio = r / (m.nu * std::pow(r, 2.0 * m.beta));
      return mass * std::pow(r, d - 1) * m.bump(r) / std::pow(r, d + 2.0 * m.alpha - 2.0) *
             std::pow(ratio, k);
    };
    out.values[k - 1] = quad::radial(f, 0.0, m.p_max, radial_options(0, 0.0));
    out.refined[k - 1] = quad::radial(f, 0.0, m.p_max, radial_options(1, 0.0));
    const double scale = std::max(std::abs(out.refined[k - 1]), 1e-300);
    out.max_relative_gap =
        std::max(out.max_relative_gap, std::abs(out.values[k - 1] - out.refined[k - 1]) / scale);
  }
  if (out.max_relative_gap > 1e-6) {
    std::ostringstream os;
    os << "regularity integrals do not converge under mesh refinement (relative gap "
       << out.max_relative_gap << "); the model fails the regularity conditions";
    throw ConvergenceError(os.str());
  }
  return out;
}

JumpMeasure::JumpMeasure(SpectrumModel model, double eta)
    : model_(std::move(model)), eta_(eta), cache_(std::make_shared<Cache>()) {
  model_.validate();
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw DomainError("JumpMeasure: eta must be finite and positive");
}

JumpMeasure JumpMeasure::refined() const {
  JumpMeasure copy(model_, eta_);
  copy.refinement_ = refinement_ + 1;
  return copy;
}

double JumpMeasure::sigma_radial(double r) const noexcept {
  if (r <= 0.0 || r >= support()) return 0.0;
  const int d = model_.dimension;
  return 2.0 * model_.bump(eta_ * r) /
         (std::pow(kTwoPi, d) * model_.nu * std::pow(r, d + theta()));
}

double JumpMeasure::sigma(std::span<const double> p) const {
  check_point(model_, p, "sigma");
  return sigma_radial(norm(p)) * model_.angular_factor(p);
}

double JumpMeasure::psi(std::span<const double> q) const {
  const int d = model_.dimension;
  if (static_cast<int>(q.size()) != d)
    throw PreconditionError("psi: vector dimension does not match the model");
  const double qn = norm(q);
  if (qn == 0.0 || is_zero()) return 0.0;
  const auto opts = radial_options(refinement_, qn);
  const double S = support();

  if (d == 1) {
    auto f = [&](double r) {
      const double s = std::sin(0.5 * r * qn);
      return sigma_radial(r) * s * s;
    };
    return -4.0 * quad::radial(f, 0.0, S, opts);
  }
  if (d == 2 && model_.angular) {
    const double phi_q = std::atan2(q[1], q[0]);
    auto f = [&](double r) {
      const double z = r * qn;
      const int n = 64 + 2 * static_cast<int>(std::ceil(z));
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double phi = kTwoPi * i / n;
        const double h = std::sin(0.5 * z * std::cos(phi - phi_q));
        s += model_.angular(phi) * h * h;
      }
      return r * sigma_radial(r) * s * kTwoPi / n;
    };
    return -2.0 * quad::radial(f, 0.0, S, opts);
  }
  if (d == 2) {
    auto f = [&](double r) { return r * sigma_radial(r) * one_minus_j0(r * qn); };
    return -kTwoPi * quad::radial(f, 0.0, S, opts);
  }
  auto f = [&](double r) { return r * r * sigma_radial(r) * one_minus_sinc(r * qn); };
  return -4.0 * std::numbers::pi * quad::radial(f, 0.0, S, opts);
}

double JumpMeasure::total_rate(double delta) const {
  if (!(delta > 0.0)) throw DomainError("total_rate: delta must be positive");
  if (delta >= support() || is_zero()) return 0.0;
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->rates.find(delta);
    if (it != cache_->rates.end()) return it->second;
  }
  const int d = model_.dimension;
  auto f = [&](double r) { return std::pow(r, d - 1) * sigma_radial(r); };
  const double rate =
      model_.angular_mass() * quad::radial(f, delta, support(), radial_options(refinement_, 0.0));
  std::lock_guard lock(cache_->mutex);
  cache_->rates.emplace(delta, rate);
  return rate;
}

double JumpMeasure::second_moment(double delta) const {
  if (delta >= support() || is_zero()) return 0.0;
  const int d = model_.dimension;
  auto f = [&](double r) { return std::pow(r, d + 1) * sigma_radial(r); };
  return model_.angular_mass() *
         quad::radial(f, std::max(delta, 0.0), support(), radial_options(refinement_, 0.0));
}

double psi_path_integral(const JumpMeasure& jump, std::span<const double> q,
                         std::span<const double> y, double t) {
  if (t < 0.0) throw PreconditionError("psi_path_integral: t must be nonnegative");
  if (q.size() != y.size()) throw PreconditionError("psi_path_integral: dimension mismatch");
  if (t == 0.0) return 0.0;
  if (norm(y) == 0.0) return t * jump.psi(q);
  std::vector<double> point(q.size());
  auto f = [&](double u) {
    for (std::size_t i = 0; i < q.size(); ++i) point[i] = q[i] + u * y[i];
    return jump.psi(point);
  };
  // Psi(q + u y) peaks where q + u y passes closest to the origin.
  double qy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    qy += q[i] * y[i];
    yy += y[i] * y[i];
  }
  const double u_star = -qy / yy;
  if (u_star > 0.0 && u_star < t)
    return quad::adaptive(f, 0.0, u_star, 1e-7) + quad::adaptive(f, u_star, t, 1e-7);
  return quad::adaptive(f, 0.0, t, 1e-7);
}

double psi_path_integral(const JumpMeasure& jump, double q, double y, double t) {
  return psi_path_integral(jump, std::span<const double>(&q, 1), std::span<const double>(&y, 1),
                           t);
}

PsiTable::PsiTable(const JumpMeasure& jump, double q_max) {
  if (jump.dimension() != 1) throw PreconditionError("PsiTable: only dimension 1 is supported");
  const double width = std::min(0.25, 2.0 / jump.support());
  const double upper = std::max(q_max, width);
  table_ = PiecewiseChebyshev([&](double q) { return jump.psi(q); }, 0.0, upper, width, 24);
}

double PsiTable::psi(double q) const { return table_(std::abs(q)); }

double PsiTable::antiderivative(double q) const {
  return q >= 0.0 ? table_.integral(q) : -table_.integral(-q);
}

double PsiTable::path_integral(double q, double y, double t) const {
  if (t == 0.0) return 0.0;
  const double span = t * y;
  if (std::abs(span) < 1e-3 * std::max(1.0, std::abs(q))) {
    const double c = 0.5 / std::numbers::sqrt3;
    return 0.5 * t * (psi(q + span * (0.5 - c)) + psi(q + span * (0.5 + c)));
  }
  return (antiderivative(q + span) - antiderivative(q)) / y;
}

}  // namespace lrk
