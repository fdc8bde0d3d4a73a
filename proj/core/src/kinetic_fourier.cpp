#include "lrk/kinetic_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrk/error.hpp"
#include "lrk/parallel.hpp"

namespace lrk {

namespace {

// Representatives of a dual bin: both signs at the Nyquist bin.
int representatives(int i, int n, double spacing, double out[2]) {
  if (i == n / 2) {
    out[0] = -0.5 * n * spacing;
    out[1] = 0.5 * n * spacing;
    return 2;
  }
  out[0] = dual_frequency(i, n, spacing);
  return 1;
}

std::vector<cplx> to_complex(const WignerField& w) {
  return std::vector<cplx>(w.values.begin(), w.values.end());
}

}  // namespace

std::vector<cplx> field_spectrum(const WignerField& w) {
  auto data = to_complex(w);
  Fft2D fft(w.grid.n_x, w.grid.n_k);
  fft.forward(data.data());
  return data;
}

double alias_fraction(const WignerField& w0, double t) {
  if (t == 0.0) return 0.0;
  const auto& g = w0.grid;
  const auto spec = field_spectrum(w0);
  const double y_n = g.y_nyquist();
  double total = 0.0, lost = 0.0;
  for (int i = 0; i < g.n_x; ++i) {
    const double q = dual_frequency(i, g.n_x, g.dq());
    for (int j = 0; j < g.n_k; ++j) {
      const double e = std::norm(spec[static_cast<std::size_t>(i) * g.n_k + j]);
      total += e;
      const double y0 = dual_frequency(j, g.n_k, g.dy());
      if (std::abs(y0 - t * q) > y_n * (1.0 + 1e-12)) lost += e;
    }
  }
  return total > 0.0 ? lost / total : 0.0;
}

WignerField spectral_flow(const WignerField& w0, double t, const SpectralDamping& damping,
                          const FourierOptions& opts, FlowDiagnostics* diag) {
  if (t < 0.0) throw PreconditionError("spectral flow: t must be nonnegative");
  const auto& g = w0.grid;
  g.validate();
  if (w0.values.size() != g.size()) throw PreconditionError("spectral flow: value count mismatch");
  for (double v : w0.values)
    if (!std::isfinite(v)) throw PreconditionError("spectral flow: w0 has non-finite values");
  if (diag) *diag = {};
  if (t == 0.0) {
    WignerField out = w0;
    return out;
  }

  const double frac = alias_fraction(w0, t);
  if (diag) diag->alias_fraction = frac;
  if (frac > opts.alias_tolerance) {
    std::ostringstream os;
    os << "shear by t = " << t << " moves a fraction " << frac
       << " of the spectral energy past the k-dual Nyquist frequency " << g.y_nyquist()
       << " (tolerance " << opts.alias_tolerance << "); enlarge n_k or reduce L_k or t";
    throw AliasingError(os.str());
  }

  const int nx = g.n_x, nk = g.n_k;
  auto data = to_complex(w0);
  Fft2D fft(nx, nk);

  fft.forward_axis0(data.data());
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    cplx* row = &data[i * nk];
    if (static_cast<int>(i) == nx / 2) {
      const double qn = g.q_nyquist();
      for (int j = 0; j < nk; ++j) row[j] *= std::cos(qn * t * g.k(j));
      return;
    }
    const double q = dual_frequency(static_cast<int>(i), nx, g.dq());
    for (int j = 0; j < nk; ++j) row[j] *= std::polar(1.0, -q * t * g.k(j));
  });
  fft.forward_axis1(data.data());

  if (damping) {
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
      double qs[2], ys[2];
      const int nq = representatives(static_cast<int>(i), nx, g.dq(), qs);
      for (int j = 0; j < nk; ++j) {
        const int ny = representatives(j, nk, g.dy(), ys);
        double d = 0.0;
        for (int a = 0; a < nq; ++a)
          for (int b = 0; b < ny; ++b) d += damping(qs[a], ys[b]);
        data[i * nk + j] *= d / (nq * ny);
      }
    });
  }

  fft.backward(data.data());
  const double scale = 1.0 / (static_cast<double>(nx) * nk);
  WignerField out = WignerField::zeros(g, w0.time_stamp + t);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    out.values[n] = data[n].real() * scale;
    max_re = std::max(max_re, std::abs(data[n].real()));
    max_im = std::max(max_im, std::abs(data[n].imag()));
  }
  if (diag) diag->imaginary_residue = max_re > 0.0 ? max_im / max_re : 0.0;
  return out;
}

WignerField solve_fourier(const WignerField& w0, const JumpMeasure& jump, double t,
                          const FourierOptions& opts, FlowDiagnostics* diag) {
  if (jump.dimension() != 1) throw PreconditionError("solve_fourier: only dimension 1 is supported");
  if (t == 0.0 || jump.is_zero()) return spectral_flow(w0, t, {}, opts, diag);
  const auto& g = w0.grid;
  const double reach = (g.y_nyquist() + t * g.q_nyquist()) * (1.0 + 1e-9);
  const PsiTable table(jump, reach);
  auto damping = [&](double q, double y) { return std::exp(table.path_integral(y, q, t)); };
  return spectral_flow(w0, t, damping, opts, diag);
}

WignerField free_transport(const WignerField& w0, double t, const FourierOptions& opts,
                           FlowDiagnostics* diag) {
  return spectral_flow(w0, t, {}, opts, diag);
}

double spectral_tail_mass(const WignerField& w, double cutoff) {
  const auto& g = w.grid;
  if (!(cutoff > 0.0)) throw PreconditionError("spectral_tail_mass: cutoff must be positive");
  if (cutoff >= std::max(g.q_nyquist(), g.y_nyquist()))
    throw PreconditionError("spectral_tail_mass: cutoff must lie below the grid Nyquist frequency");
  const auto spec = field_spectrum(w);
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < g.n_x; ++i) {
    const double q = std::abs(dual_frequency(i, g.n_x, g.dq()));
    for (int j = 0; j < g.n_k; ++j) {
      const double y = std::abs(dual_frequency(j, g.n_k, g.dy()));
      const double e = std::norm(spec[static_cast<std::size_t>(i) * g.n_k + j]);
      total += e;
      if (std::max(q, y) > cutoff) tail += e;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace lrk
