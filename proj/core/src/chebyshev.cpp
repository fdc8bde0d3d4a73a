#include "lrk/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lrk/error.hpp"
#include "lrk/parallel.hpp"

namespace lrk {

namespace {

double clenshaw(const double* c, int n, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f,
                                       double a, double b, double max_panel_width,
                                       int degree)
    : a_(a), b_(b), degree_(degree) {
  if (!(b > a) || !(max_panel_width > 0.0) || degree < 2)
    throw PreconditionError("PiecewiseChebyshev: invalid interval, width or degree");
  panels_ = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel_width)));
  width_ = (b - a) / panels_;
  const int n = degree + 1;
  coeffs_.assign(static_cast<std::size_t>(panels_) * n, 0.0);
  anti_.assign(static_cast<std::size_t>(panels_) * (n + 1), 0.0);
  offsets_.assign(static_cast<std::size_t>(panels_) + 1, 0.0);

  std::vector<double> nodes(n);
  for (int j = 0; j < n; ++j) nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / n);

  parallel_for(static_cast<std::size_t>(panels_), [&](std::size_t p) {
    const double lo = a_ + static_cast<double>(p) * width_;
    const double half = 0.5 * width_;
    std::vector<double> values(n);
    for (int j = 0; j < n; ++j) values[j] = f(lo + half * (nodes[j] + 1.0));
    double* c = &coeffs_[p * n];
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
      c[k] = 2.0 * s / n;
    }
    c[0] *= 0.5;

    double* C = &anti_[p * (n + 1)];
    auto at = [&](int k) { return k < n ? c[k] : 0.0; };
    C[1] = at(0) - 0.5 * at(2);
    for (int k = 2; k <= n; ++k) C[k] = (at(k - 1) - at(k + 1)) / (2.0 * k);
    double at_minus_one = 0.0;
    for (int k = 1; k <= n; ++k) at_minus_one += (k % 2 ? -C[k] : C[k]);
    C[0] = -at_minus_one;
    for (int k = 0; k <= n; ++k) C[k] *= half;
  });

  for (int p = 0; p < panels_; ++p)
    offsets_[p + 1] = offsets_[p] + clenshaw(&anti_[static_cast<std::size_t>(p) * (n + 1)], n + 1, 1.0);
}

int PiecewiseChebyshev::panel_of(double x, double& local) const {
  if (x < a_ - 1e-12 * width_ || x > b_ + 1e-12 * width_)
    throw DomainError("PiecewiseChebyshev: argument outside the tabulated range");
  int p = static_cast<int>((x - a_) / width_);
  p = std::clamp(p, 0, panels_ - 1);
  const double lo = a_ + p * width_;
  local = std::clamp(2.0 * (x - lo) / width_ - 1.0, -1.0, 1.0);
  return p;
}

double PiecewiseChebyshev::operator()(double x) const {
  double t;
  const int p = panel_of(x, t);
  return clenshaw(&coeffs_[static_cast<std::size_t>(p) * (degree_ + 1)], degree_ + 1, t);
}

double PiecewiseChebyshev::integral(double x) const {
  double t;
  const int p = panel_of(x, t);
  return offsets_[p] +
         clenshaw(&anti_[static_cast<std::size_t>(p) * (degree_ + 2)], degree_ + 2, t);
}

}  // namespace lrk
