#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lrk/error.hpp"
#include "lrk/phase_space.hpp"
#include "lrk/spectrum_model.hpp"

namespace lrk {

/// Every threshold used by a pass/fail decision. The acceptance suite and
/// the cross-validate command both read these.
struct Tolerances {
  double mc_rmse_fraction = 0.015;
  double mc_point_fraction = 0.01;
  double stderr_multiple = 3.0;
  double norm_slack = 1e-8;
  double damping_relative = 0.01;
  double fractional_spread = 0.005;
  double fractional_slope = 0.005;
  double unitarity_drift = 1e-10;
  double free_limit = 1e-6;
  double constants_relative = 1e-8;
  double strang_ratio_min = 3.0;
  double strang_ratio_max = 5.0;
};

enum class SolverKind { fourier, mc, series, fractional, schrodinger };

const char* solver_name(SolverKind k);

struct RunSettings {
  double t = 1.0;
  std::uint64_t seed = 0;
  long n_paths = 100000;
  double delta = 0.01;
  std::vector<double> etas{1.0, 0.5, 0.25, 0.125};
  std::vector<double> epsilons{0.5, 0.25, 0.125};
  double gamma = 0.5;
  int n_potentials = 64;
  int n_mixture = 32;
  /// Collision series.
  int cutoff_N = 10;
  int n_max = 3;
  int time_quad_order = 6;
  int p_quad_order = 6;
  /// Gaussian initial field amp exp(-(x-x0)^2/(2 sx^2) - (k-k0)^2/(2 sk^2)),
  /// unless initial_field names a field CSV.
  double w0_x0 = 0.0;
  double w0_k0 = 0.0;
  double w0_sx = 2.5;
  double w0_sk = 2.5;
  double w0_amp = 1.0;
  std::string initial_field;
  /// Probe points for pointwise comparisons.
  int probes = 20;
  /// synth-field grid and stepping (fast-time units).
  int field_n = 256;
  double field_L = 64.0;
  int field_steps = 0;
  double field_dt = 0.1;
  /// Schrodinger experiment initial data.
  double position_width = 2.0;
  double momentum_center = 1.0;
  double momentum_width = 0.5;
  bool freeze_potential = false;
};

struct ExperimentConfig {
  SpectrumModel model;
  PhaseSpaceGrid grid;
  SolverKind solver = SolverKind::fourier;
  RunSettings run;
  std::filesystem::path output_dir = "lrk_out";
  Tolerances tolerance;
};

/// Raised by parse_config; carries every violation found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Canonical "section.key" names accepted in files and environment.
std::vector<std::string> config_keys();

/// Cross-field validation; one message per violated field.
std::vector<std::string> config_violations(const ExperimentConfig& cfg);

/// Applies "section.key" = value assignments on top of cfg.
void apply_settings(ExperimentConfig& cfg, const std::map<std::string, std::string>& values,
                    std::vector<std::string>& violations);

/// Reads an INI file (sections model, grid, solver, run, output,
/// tolerance), then LRK_SECTION_KEY or LRK_SECTION.KEY environment
/// overrides. Unknown keys and all constraint violations are reported
/// together in one ConfigError.
ExperimentConfig parse_config(const std::filesystem::path& path);
/// Same starting from defaults, without a file.
ExperimentConfig default_config();

/// Environment overrides for the given config, as "section.key" -> value.
std::map<std::string, std::string> environment_overrides();

/// INI text that parses back to cfg.
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace lrk
