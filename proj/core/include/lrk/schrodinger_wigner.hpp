#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "lrk/fft.hpp"
#include "lrk/field_synthesis.hpp"
#include "lrk/phase_space.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

/// Wave function on the periodic grid x_i = -L + i (2L / n) in slow
/// variables. The potential it sees lives on z = x / epsilon.
struct WaveField {
  std::vector<cplx> psi;
  double L = 0.0;
  double epsilon = 1.0;
  double gamma = 0.5;
  double time = 0.0;

  int n() const noexcept { return static_cast<int>(psi.size()); }
  double dx() const noexcept { return 2.0 * L / n(); }
  double x(int i) const noexcept { return -L + i * dx(); }
};

double wave_norm(const WaveField& w);

/// Finite quadrature of the mixture measure: psi_0(x) e^{i k_l x / epsilon}
/// with probability weights[l].
struct MixtureConfig {
  std::vector<double> k_nodes;
  std::vector<double> weights;
  std::function<cplx(double)> base_profile;

  void validate() const;
};

struct SplitStepOptions {
  /// Keep the potential at its initial realization.
  bool freeze_potential = false;
  /// Upper bound on gap_max * dt_fast for one field sub-step.
  double max_gap_step = 0.1;
  /// Upper bound on epsilon k_max^2 dt / 2.
  double max_kinetic_phase = 0.5;
};

/// Number of field sub-steps per slow step, and the kinetic phase bound
/// check; PreconditionError with the offending bound.
int field_substeps(const WaveField& wave, const FieldState* field, double dt_slow,
                   const SplitStepOptions& opts = {});

/// Strang split-step evolution of every wave over n_steps slow steps of
/// size dt_slow, all driven by one potential. field == nullptr means V = 0.
/// The field is advanced in fast time dt_slow / epsilon^{1+gamma}.
void split_step_evolve(std::vector<WaveField>& waves, FieldState* field, double dt_slow,
                       int n_steps, const SplitStepOptions& opts = {});
void split_step_evolve(WaveField& wave, FieldState* field, double dt_slow, int n_steps,
                       const SplitStepOptions& opts = {});

/// Wave grid size that puts every Wigner offset on a grid point for the
/// given phase-space grid and epsilon: 4 L_x L_k / (pi epsilon), which must
/// be a power of two no smaller than n_x. PreconditionError otherwise.
int admissible_wave_points(const PhaseSpaceGrid& grid, double epsilon);

/// Accumulates weighted correlations phi(x - m h) conj(phi(x + m h)),
/// h = epsilon pi / (2 L_k), at the Wigner x nodes.
class WignerAccumulator {
 public:
  WignerAccumulator(const PhaseSpaceGrid& grid, double epsilon);

  void add(const WaveField& wave, double weight);
  /// Discrete transform over the offsets. InternalError when the result
  /// is not real to 1e-10 of its maximum.
  WignerField result(double time_stamp, double* imaginary_residue = nullptr) const;

 private:
  PhaseSpaceGrid grid_;
  double epsilon_;
  int n_wave_;
  std::vector<cplx> corr_;
};

WignerField wigner_transform(const std::vector<WaveField>& waves,
                             const std::vector<double>& weights, const PhaseSpaceGrid& grid,
                             double* imaginary_residue = nullptr);

/// Separable Gaussian test functions used by the weak metric.
struct TestFunction {
  double x0, k0, sx, sk;
  double operator()(double x, double k) const;
};
constexpr int kTestFunctionCount = 16;
const std::array<TestFunction, kTestFunctionCount>& test_library();

/// Grid inner product with test_library()[test_id].
double weak_observable(const WignerField& w, int test_id);
/// sum_j 2^{-(j+1)} |<a - b, g_j>|.
double weak_distance(const WignerField& a, const WignerField& b);

struct KineticExperimentConfig {
  SpectrumModel model;
  PhaseSpaceGrid grid{64, 64, 16.0, 2.0 * std::numbers::pi};
  double t = 0.5;
  double gamma = 0.5;
  std::vector<double> epsilons{0.5, 0.25, 0.125};
  int n_potentials = 64;
  int n_mixture = 32;
  /// |psi_0|^2 is a normal density N(x0, position_width^2); mu is
  /// N(k0, momentum_width^2).
  double x0 = 0.0;
  double position_width = 2.0;
  double k0 = 1.0;
  double momentum_width = 0.5;
  std::uint64_t seed = 0;
  SplitStepOptions split;
};

struct EpsilonResult {
  double epsilon = 0.0;
  int n_wave_points = 0;
  int n_steps = 0;
  double D = 0.0;
  std::array<double, kTestFunctionCount> schrodinger{};
  std::array<double, kTestFunctionCount> kinetic{};
  /// Standard deviation over potential realizations.
  std::array<double, kTestFunctionCount> ensemble_std{};
  double runtime_seconds = 0.0;
  WignerField wigner;
};

struct KineticExperimentResult {
  WignerField kinetic;
  std::vector<EpsilonResult> rows;
  bool D_decreasing = true;
  bool spread_decreasing = true;
};

/// Builds the mixture for one epsilon: n_mixture k-grid nodes around k0
/// with normalized Gaussian weights.
MixtureConfig make_mixture(const KineticExperimentConfig& cfg);
/// mu(k) |psi_0(x)|^2 on the phase-space grid.
WignerField mixture_limit(const KineticExperimentConfig& cfg);

KineticExperimentResult kinetic_limit_experiment(const KineticExperimentConfig& cfg);

}  // namespace lrk
