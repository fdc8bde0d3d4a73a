#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lrk/parallel.hpp"
#include "lrk/phase_space.hpp"
#include "lrk/runner.hpp"

using namespace lrk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("LRK_TEST_TMP");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "lrk_runner";
  const fs::path p = root / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig small_config(const std::string& name) {
  auto cfg = default_config();
  cfg.grid = PhaseSpaceGrid{32, 32, 8.0, 8.0};
  cfg.run.w0_sx = 1.5;
  cfg.run.w0_sk = 1.5;
  cfg.output_dir = scratch(name);
  return cfg;
}

}  // namespace

TEST(Runner, CommandList) {
  const auto& names = command_names();
  EXPECT_EQ(names.size(), 9u);
  std::ostringstream log;
  EXPECT_THROW(run_command("nope", small_config("nope"), log), PreconditionError);
}

TEST(Runner, FourierAtTimeZeroReproducesInput) {
  auto cfg = small_config("fourier_t0");
  cfg.run.t = 0.0;
  std::ostringstream log;
  ASSERT_EQ(run_command("solve", cfg, log), 0);
  const auto out = read_field_csv(cfg.output_dir / "fourier.csv");
  const auto w0 = initial_field(cfg);
  ASSERT_EQ(out.values.size(), w0.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) EXPECT_NEAR(out.values[i], w0.values[i], 1e-14);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "manifest.json"));
}

TEST(Runner, ManifestContents) {
  auto cfg = small_config("manifest");
  std::ostringstream log;
  ASSERT_EQ(run_command("constants", cfg, log), 0);
  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
  EXPECT_EQ(j.at("command"), "constants");
  EXPECT_EQ(j.at("exit_status"), 0);
  EXPECT_TRUE(j.contains("version"));
  EXPECT_TRUE(j.contains("seed"));
  EXPECT_TRUE(j.contains("threads"));
  EXPECT_TRUE(j.contains("wall_time_seconds"));
  EXPECT_TRUE(j.at("libraries").contains("fftw"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "constants.csv"));
}

TEST(Runner, McSameSeedSameBytes) {
  auto a = small_config("mc_a");
  a.run.n_paths = 10;
  a.run.seed = 17;
  auto b = a;
  b.output_dir = scratch("mc_b");
  std::ostringstream log;
  run_command("mc", a, log);
  run_command("mc", b, log);
  const auto x = slurp(a.output_dir / "mc.csv");
  EXPECT_FALSE(x.empty());
  EXPECT_EQ(x, slurp(b.output_dir / "mc.csv"));

  auto c = a;
  c.run.seed = 18;
  c.output_dir = scratch("mc_c");
  run_command("mc", c, log);
  EXPECT_NE(x, slurp(c.output_dir / "mc.csv"));
}

TEST(Runner, OutputIndependentOfThreadCount) {
  const unsigned saved = default_threads();
  auto cfg = small_config("threads_1");
  cfg.run.n_paths = 200;
  std::ostringstream log;
  set_default_threads(1);
  run_command("mc", cfg, log);
  run_command("synth-field", cfg, log);
  auto cfg4 = cfg;
  cfg4.output_dir = scratch("threads_4");
  set_default_threads(4);
  run_command("mc", cfg4, log);
  run_command("synth-field", cfg4, log);
  set_default_threads(saved);
  EXPECT_EQ(slurp(cfg.output_dir / "mc.csv"), slurp(cfg4.output_dir / "mc.csv"));
  EXPECT_EQ(slurp(cfg.output_dir / "field.csv"), slurp(cfg4.output_dir / "field.csv"));
}

TEST(Runner, SchrodingerRejectsInadmissibleEpsilon) {
  auto cfg = small_config("schrodinger_bad");
  cfg.grid = PhaseSpaceGrid{64, 64, 16.0, 2.0 * std::numbers::pi};
  cfg.run.epsilons = {0.3};
  std::ostringstream log;
  EXPECT_THROW(run_command("schrodinger", cfg, log), ConfigError);
}
