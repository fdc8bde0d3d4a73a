#include "lrk/collision_series.hpp"

#include <cmath>

#include "lrk/error.hpp"
#include "lrk/parallel.hpp"
#include "lrk/quadrature.hpp"

namespace lrk {

double poisson_tail_bound(double sigma_N, double t, int n_max) {
  if (sigma_N < 0.0 || t < 0.0 || n_max < 0)
    throw PreconditionError("poisson_tail_bound: inputs must be nonnegative");
  const double s = sigma_N * t;
  if (s == 0.0) return 0.0;
  double sum = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = std::exp(-s + n * std::log(s) - std::lgamma(n + 1.0));
    sum += term;
    if (n > s && term <= 1e-18 * sum) break;
    if (n > n_max + 100000) break;
  }
  return sum;
}

CollisionSeries::CollisionSeries(const JumpMeasure& jump, const SeriesConfig& cfg) : cfg_(cfg) {
  if (jump.dimension() != 1) throw PreconditionError("collision series: only dimension 1 is supported");
  if (cfg.cutoff_N < 1) throw PreconditionError("collision series: cutoff_N must be positive");
  if (cfg.n_max < 0 || cfg.n_max > 3) throw PreconditionError("collision series: n_max must lie in [0, 3]");
  if (cfg.time_quad_order < 1 || cfg.p_quad_order < 1)
    throw PreconditionError("collision series: quadrature orders must be positive");

  const double lo = 1.0 / cfg.cutoff_N;
  const double hi = jump.support();
  if (lo < hi && !jump.is_zero()) {
    sigma_N_ = jump.total_rate(lo);
    const auto& rule = quad::gauss_legendre(cfg.p_quad_order);
    auto add_interval = [&](double a, double b) {
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double p = mid + half * rule.nodes[i];
        const double w = half * rule.weights[i] * jump.sigma_radial(p);
        p_.push_back(p);
        p_weight_.push_back(w);
        p_.push_back(-p);
        p_weight_.push_back(w);
      }
    };
    for (double top = hi; top > lo;) {
      const double bottom = std::max(lo, 0.5 * top);
      add_interval(bottom, top);
      top = bottom;
    }
  }
  const auto& trule = quad::gauss_legendre(cfg.time_quad_order);
  for (std::size_t i = 0; i < trule.nodes.size(); ++i) {
    u_.push_back(0.5 * (trule.nodes[i] + 1.0));
    u_weight_.push_back(0.5 * trule.weights[i]);
  }
}

SeriesPointResult CollisionSeries::evaluate(const std::function<double(double, double)>& lambda,
                                            double x, double k, double t, double lambda_sup,
                                            SeriesOrientation orientation) const {
  if (t < 0.0) throw PreconditionError("collision series: t must be nonnegative");
  SeriesPointResult res;
  res.tail_bound = poisson_tail_bound(sigma_N_, t, cfg_.n_max) * lambda_sup;
  if (t == 0.0) {
    res.value = lambda(x, k);
    return res;
  }
  // transport: lambda(x - t k - sum s_j p_j, k + sum p_j)
  // as_written: lambda(x + t k + sum s_j p_j, k + sum p_j)
  const double sign = orientation == SeriesOrientation::transport ? -1.0 : 1.0;
  const double x0 = x + sign * t * k;

  double total = lambda(x0, k);
  const std::size_t nt = u_.size(), np = p_.size();

  auto term = [&](auto&& self, int level, int order, double s_prev, double X, double K,
                  double w) -> double {
    if (level == order) return w * lambda(X, K);
    double acc = 0.0;
    for (std::size_t a = 0; a < nt; ++a) {
      const double s = s_prev * u_[a];
      const double wt = w * s_prev * u_weight_[a];
      for (std::size_t b = 0; b < np; ++b)
        acc += self(self, level + 1, order, s, X + sign * s * p_[b], K + p_[b],
                    wt * p_weight_[b]);
    }
    return acc;
  };
  for (int n = 1; n <= cfg_.n_max && np > 0; ++n) total += term(term, 0, n, t, x0, k, 1.0);
  res.value = std::exp(-sigma_N_ * t) * total;
  return res;
}

SeriesFieldResult solve_series(const std::function<double(double, double)>& lambda,
                               double lambda_sup, const PhaseSpaceGrid& grid,
                               const JumpMeasure& jump, const SeriesConfig& cfg, double t,
                               double tail_budget, SeriesOrientation orientation) {
  grid.validate();
  const CollisionSeries series(jump, cfg);
  SeriesFieldResult out;
  out.field = WignerField::zeros(grid, t);
  parallel_for(static_cast<std::size_t>(grid.n_x), [&](std::size_t i) {
    for (int j = 0; j < grid.n_k; ++j)
      out.field.at(static_cast<int>(i), j) =
          series.evaluate(lambda, grid.x(static_cast<int>(i)), grid.k(j), t, lambda_sup, orientation)
              .value;
  });
  out.tail_bound = poisson_tail_bound(series.sigma_N(), t, cfg.n_max) * lambda_sup;
  out.over_budget = out.tail_bound > tail_budget;
  return out;
}

}  // namespace lrk
