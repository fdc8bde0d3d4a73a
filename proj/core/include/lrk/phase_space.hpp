#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace lrk {

/// Periodic phase-space grid: x_i = -L_x + i dx, k_j = -L_k + j dk.
struct PhaseSpaceGrid {
  int n_x = 256;
  int n_k = 256;
  double L_x = 8.0 * std::numbers::pi;
  double L_k = 8.0 * std::numbers::pi;

  double dx() const noexcept { return 2.0 * L_x / n_x; }
  double dk() const noexcept { return 2.0 * L_k / n_k; }
  double x(int i) const noexcept { return -L_x + i * dx(); }
  double k(int j) const noexcept { return -L_k + j * dk(); }
  /// Spacing of the frequency dual to x, and to k.
  double dq() const noexcept;
  double dy() const noexcept;
  double q_nyquist() const noexcept;
  double y_nyquist() const noexcept;
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_x) * n_k; }

  std::vector<std::string> violations() const;
  void validate() const;
  bool operator==(const PhaseSpaceGrid&) const = default;
};

/// Real samples over the grid, stored as values[ix * n_k + ik].
struct WignerField {
  PhaseSpaceGrid grid;
  std::vector<double> values;
  double time_stamp = 0.0;

  static WignerField zeros(const PhaseSpaceGrid& grid, double time_stamp = 0.0);

  double& at(int ix, int ik) { return values[static_cast<std::size_t>(ix) * grid.n_k + ik]; }
  double at(int ix, int ik) const { return values[static_cast<std::size_t>(ix) * grid.n_k + ik]; }
  double max_abs() const;
};

double l2_norm(const WignerField& w);
double l2_distance(const WignerField& a, const WignerField& b);
/// Grid quadrature of the product of two fields.
double inner_product(const WignerField& a, const WignerField& b);

WignerField sample_function(const PhaseSpaceGrid& grid,
                            const std::function<double(double, double)>& f);
/// amp * exp(-(x-x0)^2/(2 sx^2) - (k-k0)^2/(2 sk^2)).
WignerField make_gaussian(const PhaseSpaceGrid& grid, double x0, double k0, double sx,
                          double sk, double amp = 1.0);

/// Periodic bilinear interpolation of a field.
class BilinearSampler {
 public:
  explicit BilinearSampler(const WignerField& w) : w_(w) {}
  /// `wrapped` is set when (x, k) lies outside the fundamental domain.
  double operator()(double x, double k, bool* wrapped = nullptr) const;

 private:
  const WignerField& w_;
};

/// CSV with a "# key=value,..." metadata line, a header and one row per
/// grid point; optional stderr column. 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const WignerField& w,
                     const std::vector<double>* stderr_values = nullptr,
                     const std::map<std::string, std::string>& extra_metadata = {});
WignerField read_field_csv(const std::filesystem::path& path,
                           std::vector<double>* stderr_values = nullptr);

}  // namespace lrk
