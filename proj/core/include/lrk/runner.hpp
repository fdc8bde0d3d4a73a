#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lrk/config.hpp"
#include "lrk/phase_space.hpp"

namespace lrk {

/// Command names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one command, writes its artifacts and a manifest.json into
/// cfg.output_dir, and prints a short summary to `log`. Returns the
/// process exit status: 0 on success, 1 when a cross-validation check
/// fails. Library errors propagate as exceptions.
int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log);

/// W0 from run.initial_field, or the configured Gaussian on cfg.grid.
WignerField initial_field(const ExperimentConfig& cfg);

/// Grid-node probe points (ix, ik) spread over the bulk of the solution.
std::vector<std::pair<int, int>> probe_points(const ExperimentConfig& cfg, const PhaseSpaceGrid& grid);

struct CrossCheck {
  std::string name;
  double value = 0.0;
  double budget = 0.0;
  bool pass = false;
};

/// Solver-agreement matrix: Fourier vs Monte Carlo (field RMSE and
/// probes), series vs Monte Carlo, Fourier vs fractional limit over the
/// eta schedule, and the a0 = 0 free-transport reduction.
std::vector<CrossCheck> cross_validate(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace lrk
