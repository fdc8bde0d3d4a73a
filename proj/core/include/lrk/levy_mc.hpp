#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lrk/phase_space.hpp"
#include "lrk/rng.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

/// Compound-Poisson realization of the jump process on [0, horizon].
struct LevyPath {
  int dimension = 1;
  double horizon = 0.0;
  std::vector<double> times;
  /// Jump vectors, dimension entries per jump.
  std::vector<double> jumps;

  std::size_t count() const noexcept { return times.size(); }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  double delta = 0.0;
  std::uint64_t wrapped_evaluations = 0;
};

/// Draws jumps with density proportional to sigma(p) on |p| > delta.
class JumpSampler {
 public:
  static constexpr int kKnots = 4096;

  JumpSampler(const JumpMeasure& jump, double delta);

  const JumpMeasure& measure() const noexcept { return jump_; }
  double delta() const noexcept { return delta_; }
  /// Total jump rate (integral of sigma over |p| > delta).
  double rate() const noexcept { return rate_; }
  int dimension() const noexcept { return jump_.dimension(); }

  /// Writes one jump vector (dimension() entries) to out.
  void sample(CounterRng& rng, double* out) const;
  double sample_radius(double u) const;
  /// Normalized radial CDF of the table at radius r.
  double radial_cdf(double r) const;
  double rejection_acceptance() const noexcept { return acceptance_; }

 private:
  JumpMeasure jump_;
  double delta_;
  double rate_ = 0.0;
  double acceptance_ = 1.0;
  double angular_max_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> density_;
  std::vector<double> cdf_;
};

LevyPath sample_path(const JumpSampler& sampler, double t, CounterRng& rng);
/// integral_0^t L_s ds, exact for the piecewise-constant path.
std::vector<double> occupation_integral(const LevyPath& path);
/// L_t, the sum of all jumps.
std::vector<double> path_endpoint(const LevyPath& path);

struct McOptions {
  /// Paths per independent partial sum; fixed so results do not depend on
  /// the worker count.
  long block_size = 2048;
};

/// E[w0(x - t k - int L, k + L_t)] for a function w0.
McEstimate estimate_point(const std::function<double(double, double)>& w0, double x, double k,
                          double t, const JumpMeasure& jump, double delta, long n_paths,
                          std::uint64_t seed, const McOptions& opts = {});
/// Same with w0 given on a grid (periodic bilinear interpolation).
McEstimate estimate_point(const WignerField& w0, double x, double k, double t,
                          const JumpMeasure& jump, double delta, long n_paths,
                          std::uint64_t seed, const McOptions& opts = {});

struct McField {
  WignerField mean;
  std::vector<double> std_error;
  long n_paths = 0;
  double delta = 0.0;
  std::uint64_t wrapped_evaluations = 0;
};

/// Estimates the solution at every node of w0's grid, reusing each path
/// for all nodes.
McField estimate_field(const WignerField& w0, double t, const JumpMeasure& jump, double delta,
                       long n_paths, std::uint64_t seed, const McOptions& opts = {});

}  // namespace lrk
