#pragma once

#include <functional>
#include <vector>

namespace lrk::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (thread safe, built on first use).
const GaussRule& gauss_legendre(int order);

template <class F>
double gauss(F&& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

/// Adaptive Gauss-Kronrod (15-point) on a finite interval.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double* error_estimate = nullptr);

struct RadialOptions {
  int order = 20;
  int min_subintervals = 4;
  /// Shells are [r_hi 2^{-(j+1)}, r_hi 2^{-j}], j < levels.
  int levels = 40;
  /// Subintervals per shell are raised so that each covers at most one
  /// period of cos(frequency * r).
  double frequency = 0.0;
};

/// Integral of f over [r_lo, r_hi] on a geometrically graded mesh. With
/// r_lo == 0 the part below the innermost shell is added by fitting a local
/// power law f(r) ~ c r^s to the two innermost nodes (requires s > -1).
double radial(const std::function<double(double)>& f, double r_lo, double r_hi,
              const RadialOptions& opts = {});

}  // namespace lrk::quad
