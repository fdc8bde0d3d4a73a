#include "lrk/field_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrk/error.hpp"
#include "lrk/quadrature.hpp"
#include "lrk/rng.hpp"

namespace lrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double radial_r_hat0(const SpectrumModel& m, double r) {
  if (r <= 0.0 || r >= m.p_max) return 0.0;
  return m.bump(r) / std::pow(r, 2.0 * m.alpha - 1.0);
}

// Integral of R0 over [a, b] with 0 < a, split at the bump breakpoints.
double cell_integral(const SpectrumModel& m, double a, double b) {
  b = std::min(b, m.p_max);
  if (!(b > a)) return 0.0;
  const auto& rule = quad::gauss_legendre(20);
  auto f = [&](double r) { return radial_r_hat0(m, r); };
  double s = 0.0;
  double lo = a;
  for (double cut : {0.5 * m.p_max, m.p_max}) {
    if (cut <= lo) continue;
    const double hi = std::min(cut, b);
    const double h = (hi - lo) / 4.0;
    for (int i = 0; i < 4; ++i) s += quad::gauss(f, lo + i * h, lo + (i + 1) * h, rule);
    lo = hi;
    if (lo >= b) break;
  }
  return s;
}

std::uint64_t stream_id(std::uint64_t step, int j) {
  return (step << 32) | static_cast<std::uint32_t>(j);
}

bool real_mode(const FieldState& s, int j) { return j == 0 || j == s.n / 2; }

}  // namespace

double FieldState::dp() const noexcept { return std::numbers::pi / L; }

FieldState init_field(const SpectrumModel& model, int n, double L, std::uint64_t seed) {
  if (model.dimension != 1) throw PreconditionError("init_field: only dimension 1 is supported");
  model.validate();
  if (n < 2 || (n & (n - 1)) != 0) throw PreconditionError("init_field: n must be a power of two");
  if (!(L > 0.0)) throw PreconditionError("init_field: L must be positive");
  FieldState s;
  s.model = model;
  s.n = n;
  s.L = L;
  s.seed = seed;
  const double p_nyquist = std::numbers::pi * n / (2.0 * L);
  if (p_nyquist < model.p_max) {
    std::ostringstream os;
    os << "init_field: grid Nyquist wavenumber " << p_nyquist << " is below p_max " << model.p_max
       << "; refine the grid";
    throw PreconditionError(os.str());
  }
  const int m = s.mode_count();
  const double dp = s.dp();
  s.modes.assign(m, cplx(0.0));
  s.variance.assign(m, 0.0);
  s.gap.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    const double p = j * dp;
    s.gap[j] = model.nu * std::pow(p, 2.0 * model.beta);
    double mass;
    if (j == 0) {
      quad::RadialOptions o;
      mass = 2.0 * quad::radial([&](double r) { return radial_r_hat0(model, r); }, 0.0, 0.5 * dp, o);
    } else if (j == n / 2) {
      mass = 2.0 * cell_integral(model, p - 0.5 * dp, p);
    } else {
      mass = cell_integral(model, p - 0.5 * dp, p + 0.5 * dp);
    }
    s.variance[j] = kTwoPi * mass;
  }
  for (int j = 0; j < m; ++j) {
    CounterRng rng(seed, stream_id(0, j), StreamDomain::field_modes);
    if (real_mode(s, j))
      s.modes[j] = std::sqrt(s.variance[j]) * rng.normal();
    else {
      const double a = std::sqrt(0.5 * s.variance[j]);
      const double re = rng.normal();
      s.modes[j] = cplx(a * re, a * rng.normal());
    }
  }
  s.fft = std::make_shared<const Fft1D>(n);
  return s;
}

void advance_field(FieldState& s, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("advance_field: dt must be positive");
  ++s.step;
  for (int j = 0; j < s.mode_count(); ++j) {
    const double decay = std::exp(-s.gap[j] * dt);
    const double kick = std::sqrt(s.variance[j] * -std::expm1(-2.0 * s.gap[j] * dt));
    if (kick == 0.0) {
      s.modes[j] *= decay;
      continue;
    }
    CounterRng rng(s.seed, stream_id(s.step, j), StreamDomain::field_modes);
    if (real_mode(s, j)) {
      s.modes[j] = decay * s.modes[j] + kick * rng.normal();
    } else {
      const double a = kick * std::numbers::sqrt2 / 2.0;
      const double re = rng.normal();
      s.modes[j] = decay * s.modes[j] + cplx(a * re, a * rng.normal());
    }
  }
  s.time += dt;
}

std::vector<double> realize_potential(const FieldState& s, double* imaginary_residue) {
  const int n = s.n;
  std::vector<cplx> c(n, cplx(0.0));
  for (int j = 0; j < s.mode_count(); ++j) {
    const cplx v = s.modes[j] * std::polar(1.0, -s.wavenumber(j) * s.L);
    c[j] = v;
    if (j > 0 && j < n / 2) c[n - j] = std::conj(v);
  }
  s.fft->backward(c.data());
  std::vector<double> out(n);
  double rms = 0.0, im = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = c[i].real() / kTwoPi;
    rms += out[i] * out[i];
    im = std::max(im, std::abs(c[i].imag()) / kTwoPi);
  }
  rms = std::sqrt(rms / n);
  const double residue = rms > 0.0 ? im / rms : 0.0;
  if (imaginary_residue) *imaginary_residue = residue;
  if (residue > 1e-12)
    throw InternalError("realize_potential: Hermitian symmetry lost (imaginary residue " +
                        std::to_string(residue) + ")");
  return out;
}

double potential_covariance(const FieldState& s, double lag) {
  double sum = 0.0;
  for (int j = 0; j < s.mode_count(); ++j) {
    const double weight = real_mode(s, j) ? 1.0 : 2.0;
    sum += weight * s.variance[j] * std::exp(-s.gap[j] * std::abs(lag));
  }
  return sum / (kTwoPi * kTwoPi);
}

double potential_variance(const FieldState& s) { return potential_covariance(s, 0.0); }

}  // namespace lrk
