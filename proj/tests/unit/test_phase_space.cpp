#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "lrk/error.hpp"
#include "lrk/phase_space.hpp"

using namespace lrk;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lrk_ps_" + name);
}

}  // namespace

TEST(Grid, DefaultsAndDuals) {
  PhaseSpaceGrid g;
  EXPECT_TRUE(g.violations().empty());
  EXPECT_DOUBLE_EQ(g.dq(), std::numbers::pi / g.L_x);
  EXPECT_DOUBLE_EQ(g.y_nyquist(), std::numbers::pi / g.dk());
  EXPECT_DOUBLE_EQ(g.x(0), -g.L_x);
}

TEST(Grid, RejectsNonPowerOfTwo) {
  PhaseSpaceGrid g{100, 64, 1.0, -1.0};
  const auto v = g.violations();
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].rfind("grid.n_x", 0), 0u);
  EXPECT_EQ(v[1].rfind("grid.L_k", 0), 0u);
  EXPECT_THROW(g.validate(), PreconditionError);
}

TEST(FieldCsv, BitExactRoundTrip) {
  PhaseSpaceGrid g{16, 8, 3.0, 2.0};
  WignerField w = sample_function(g, [](double x, double k) { return std::sin(x * 1.234567) / (1.0 + k * k) + 1e-300; });
  w.time_stamp = 0.1 + 0.2;
  std::vector<double> se(w.values.size());
  for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::ldexp(1.0, -static_cast<int>(i % 60)) / 3.0;
  const auto path = temp_file("roundtrip.csv");
  write_field_csv(path, w, &se, {{"solver", "test"}});
  std::vector<double> se2;
  const WignerField r = read_field_csv(path, &se2);
  EXPECT_EQ(r.grid, w.grid);
  EXPECT_EQ(r.time_stamp, w.time_stamp);
  EXPECT_EQ(r.values, w.values);
  EXPECT_EQ(se2, se);
  std::filesystem::remove(path);
}

TEST(FieldCsv, RejectsMissingMetadata) {
  const auto path = temp_file("bad.csv");
  std::ofstream(path) << "x,k,value\n0,0,1\n";
  EXPECT_THROW(read_field_csv(path), Error);
  std::filesystem::remove(path);
}

TEST(Bilinear, ExactForBilinearFunctions) {
  PhaseSpaceGrid g{32, 32, 4.0, 4.0};
  const auto w = sample_function(g, [](double x, double k) { return 1.0 + 0.5 * x - 0.25 * k + 0.1 * x * k; });
  BilinearSampler s(w);
  bool wrapped = true;
  EXPECT_NEAR(s(0.37, -1.21, &wrapped), 1.0 + 0.5 * 0.37 + 0.25 * 1.21 - 0.1 * 0.37 * 1.21, 1e-13);
  EXPECT_FALSE(wrapped);
  s(5.0, 0.0, &wrapped);
  EXPECT_TRUE(wrapped);
}

TEST(Norms, GaussianInnerProductClosedForm) {
  PhaseSpaceGrid g{128, 128, 12.0, 12.0};
  const auto a = make_gaussian(g, 0.5, -0.3, 1.0, 1.2);
  const auto b = make_gaussian(g, -0.4, 0.2, 0.7, 0.9, 2.0);
  auto factor = [](double m1, double s1, double m2, double s2) {
    const double v = s1 * s1 + s2 * s2;
    return std::sqrt(2.0 * std::numbers::pi) * s1 * s2 / std::sqrt(v) *
           std::exp(-0.5 * (m1 - m2) * (m1 - m2) / v);
  };
  const double want = 2.0 * factor(0.5, 1.0, -0.4, 0.7) * factor(-0.3, 1.2, 0.2, 0.9);
  EXPECT_NEAR(inner_product(a, b), want, 1e-10 * want);
  EXPECT_NEAR(l2_norm(a) * l2_norm(a), inner_product(a, a), 1e-12);
  EXPECT_NEAR(l2_distance(a, a), 0.0, 0.0);
}
