#pragma once

#include <complex>
#include <memory>

namespace lrk {

using cplx = std::complex<double>;

/// Unnormalized complex FFT plans (forward uses e^{-i...}). Plans are
/// created under a global lock and may be executed concurrently on any
/// array of the planned shape.
class Fft1D {
 public:
  explicit Fft1D(int n);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  int size() const noexcept { return n_; }
  void forward(cplx* data) const;
  void backward(cplx* data) const;

 private:
  int n_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Row-major n0 x n1 two dimensional transform, plus batched 1D
/// transforms along either axis.
class Fft2D {
 public:
  Fft2D(int n0, int n1);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  void forward(cplx* data) const;
  void backward(cplx* data) const;
  /// Transforms along axis 0 (for every fixed second index).
  void forward_axis0(cplx* data) const;
  void backward_axis0(cplx* data) const;
  /// Transforms along axis 1 (contiguous rows).
  void forward_axis1(cplx* data) const;
  void backward_axis1(cplx* data) const;

 private:
  int n0_, n1_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Signed frequency index of FFT bin j of an n-point transform; the
/// Nyquist bin maps to -n/2.
inline int fft_index(int j, int n) noexcept { return j < n / 2 ? j : j - n; }

}  // namespace lrk
