#pragma once

#include <functional>
#include <vector>

#include "lrk/phase_space.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

struct SeriesConfig {
  /// Jumps are restricted to |p| > 1 / cutoff_N.
  int cutoff_N = 10;
  /// Highest collision order kept (0..3).
  int n_max = 3;
  int time_quad_order = 6;
  int p_quad_order = 6;
};

/// Which transport direction the series evaluates.
enum class SeriesOrientation {
  /// Free streaming along x + t k, exactly as the expansion is written.
  as_written,
  /// Reflected in k so that the series solves W_t + k W_x = L_N W, the
  /// convention of the Monte Carlo and Fourier solvers.
  transport,
};

struct SeriesPointResult {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// sum_{n > n_max} e^{-s} s^n / n!  with s = sigma_N * t.
double poisson_tail_bound(double sigma_N, double t, int n_max);

class CollisionSeries {
 public:
  CollisionSeries(const JumpMeasure& jump, const SeriesConfig& cfg);

  const SeriesConfig& config() const noexcept { return cfg_; }
  /// Total rate of jumps above the cutoff.
  double sigma_N() const noexcept { return sigma_N_; }
  /// Number of jump quadrature nodes (both signs).
  std::size_t p_nodes() const noexcept { return p_.size(); }

  /// Series value at one phase-space point; lambda_sup bounds |lambda|.
  SeriesPointResult evaluate(const std::function<double(double, double)>& lambda, double x,
                             double k, double t, double lambda_sup,
                             SeriesOrientation orientation = SeriesOrientation::transport) const;

 private:
  SeriesConfig cfg_;
  double sigma_N_ = 0.0;
  std::vector<double> p_;
  std::vector<double> p_weight_;
  std::vector<double> u_;
  std::vector<double> u_weight_;
};

struct SeriesFieldResult {
  WignerField field;
  double tail_bound = 0.0;
  /// True when tail_bound exceeds the caller's budget.
  bool over_budget = false;
};

/// Series on every node of a grid. Cost grows like
/// (time_quad_order * p_nodes)^n_max per node, so use small grids.
SeriesFieldResult solve_series(const std::function<double(double, double)>& lambda,
                               double lambda_sup, const PhaseSpaceGrid& grid,
                               const JumpMeasure& jump, const SeriesConfig& cfg, double t,
                               double tail_budget = 1.0,
                               SeriesOrientation orientation = SeriesOrientation::transport);

}  // namespace lrk
