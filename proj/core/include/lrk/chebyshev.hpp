#pragma once

#include <functional>
#include <vector>

namespace lrk {

/// Piecewise Chebyshev interpolant of a smooth function on [a, b] with an
/// exact antiderivative of the interpolant. Panels are equal width.
class PiecewiseChebyshev {
 public:
  PiecewiseChebyshev() = default;
  /// Samples f on every panel (in parallel; f must be thread safe).
  PiecewiseChebyshev(const std::function<double(double)>& f, double a, double b,
                     double max_panel_width, int degree);

  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  bool empty() const noexcept { return panels_ == 0; }

  double operator()(double x) const;
  /// Integral of the interpolant from lower() to x.
  double integral(double x) const;

 private:
  int panel_of(double x, double& local) const;

  double a_ = 0.0;
  double b_ = 0.0;
  double width_ = 0.0;
  int panels_ = 0;
  int degree_ = 0;
  std::vector<double> coeffs_;
  std::vector<double> anti_;
  std::vector<double> offsets_;
};

}  // namespace lrk
