#pragma once

#include <functional>
#include <vector>

#include "lrk/fft.hpp"
#include "lrk/phase_space.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

struct FourierOptions {
  /// Largest admissible fraction of spectral energy that the shear would
  /// push past the k-dual Nyquist frequency.
  double alias_tolerance = 1e-8;
};

struct FlowDiagnostics {
  double imaginary_residue = 0.0;
  double alias_fraction = 0.0;
};

/// Multiplier applied at dual point (q, y); q is dual to x, y dual to k.
using SpectralDamping = std::function<double(double q, double y)>;

/// Exact flow of  W_t + k W_x = L W  for any L that is diagonal in the
/// k-dual variable: the spectrum is sheared (free transport, done exactly
/// by a Fourier phase in the mixed (q, k) representation) and multiplied
/// by damping(q, y). An empty damping means free transport.
WignerField spectral_flow(const WignerField& w0, double t, const SpectralDamping& damping,
                          const FourierOptions& opts = {}, FlowDiagnostics* diag = nullptr);

/// Radiative transfer solution with damping exp(integral_0^t Psi(y + u q) du).
WignerField solve_fourier(const WignerField& w0, const JumpMeasure& jump, double t,
                          const FourierOptions& opts = {}, FlowDiagnostics* diag = nullptr);

WignerField free_transport(const WignerField& w0, double t, const FourierOptions& opts = {},
                           FlowDiagnostics* diag = nullptr);

/// Fraction of spectral energy of w0 that a shear by t would alias.
double alias_fraction(const WignerField& w0, double t);

/// Fraction of squared spectral mass at max(|q|, |y|) > cutoff.
double spectral_tail_mass(const WignerField& w, double cutoff);

/// Unnormalized 2D DFT of the samples, indexed like the values.
std::vector<cplx> field_spectrum(const WignerField& w);

/// Dual coordinate of FFT bin i along an axis of n points with spacing d.
inline double dual_frequency(int i, int n, double spacing) {
  return fft_index(i, n) * spacing;
}

}  // namespace lrk
