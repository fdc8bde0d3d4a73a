#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrk/config.hpp"
#include "lrk/error.hpp"
#include "lrk/parallel.hpp"
#include "lrk/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kinetic limits in long-range random media"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"constants", "phase scaling constants and the fractional constant"},
      {"synth-field", "draw a potential realization and write it as CSV"},
      {"solve", "run the solver named by solver.kind"},
      {"mc", "Levy Monte Carlo field estimate"},
      {"series", "truncated collision series on the grid"},
      {"fractional", "fractional-Laplacian limit"},
      {"eta-sweep", "distance to the fractional limit over run.etas"},
      {"schrodinger", "split-step Schrodinger ensemble vs the kinetic limit"},
      {"cross-validate", "solver agreement matrix with pass/fail per budget"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--seed", seed, "override run.seed");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "override output.dir");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    lrk::ExperimentConfig cfg =
        config_path.empty() ? lrk::default_config() : lrk::parse_config(config_path);
    if (seed) cfg.run.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (threads) lrk::set_default_threads(*threads);
    return lrk::run_command(command, cfg, std::cout);
  } catch (const lrk::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
