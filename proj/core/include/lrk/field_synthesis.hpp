#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lrk/fft.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

/// Fourier modes of a one dimensional periodic Gaussian potential on
/// x_i = -L + i (2L / n). Only wavenumbers p_j = j pi / L, j = 0..n/2 are
/// stored; negative ones are their complex conjugates. Modes j = 0 and
/// j = n/2 are real.
struct FieldState {
  SpectrumModel model;
  int n = 0;
  double L = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  double time = 0.0;
  std::vector<cplx> modes;
  /// E|mode_j|^2.
  std::vector<double> variance;
  /// Spectral gap g(p_j).
  std::vector<double> gap;
  std::shared_ptr<const Fft1D> fft;

  double dp() const noexcept;
  double dx() const noexcept { return 2.0 * L / n; }
  double x(int i) const noexcept { return -L + i * dx(); }
  double wavenumber(int j) const noexcept { return j * dp(); }
  int mode_count() const noexcept { return n / 2 + 1; }
};

/// Stationary initial draw. PreconditionError if the grid Nyquist
/// wavenumber is below p_max.
FieldState init_field(const SpectrumModel& model, int n, double L, std::uint64_t seed);

/// Exact Ornstein-Uhlenbeck transition of every mode over dt.
void advance_field(FieldState& state, double dt);

/// V(x_i) = (2 pi)^{-1} sum_j V_j e^{i p_j x_i}. InternalError when the
/// imaginary residue exceeds 1e-12 of the field RMS.
std::vector<double> realize_potential(const FieldState& state,
                                      double* imaginary_residue = nullptr);

/// (2 pi)^{-2} sum over all modes (both signs) of v_j e^{-g_j s}.
double potential_covariance(const FieldState& state, double s);
double potential_variance(const FieldState& state);

}  // namespace lrk
