#include "lrk/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "lrk/error.hpp"

namespace lrk {

namespace {

bool power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int wrap_index(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

double PhaseSpaceGrid::dq() const noexcept { return std::numbers::pi / L_x; }
double PhaseSpaceGrid::dy() const noexcept { return std::numbers::pi / L_k; }
double PhaseSpaceGrid::q_nyquist() const noexcept { return std::numbers::pi / dx(); }
double PhaseSpaceGrid::y_nyquist() const noexcept { return std::numbers::pi / dk(); }

std::vector<std::string> PhaseSpaceGrid::violations() const {
  std::vector<std::string> out;
  if (!power_of_two(n_x)) out.push_back("grid.n_x: must be a power of two >= 2, got " + std::to_string(n_x));
  if (!power_of_two(n_k)) out.push_back("grid.n_k: must be a power of two >= 2, got " + std::to_string(n_k));
  if (!(L_x > 0.0) || !std::isfinite(L_x)) out.push_back("grid.L_x: must be finite and positive, got " + format17(L_x));
  if (!(L_k > 0.0) || !std::isfinite(L_k)) out.push_back("grid.L_k: must be finite and positive, got " + format17(L_k));
  return out;
}

void PhaseSpaceGrid::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid phase-space grid:";
  for (const auto& s : v) msg += "\n  " + s;
  throw PreconditionError(msg);
}

WignerField WignerField::zeros(const PhaseSpaceGrid& grid, double time_stamp) {
  grid.validate();
  return WignerField{grid, std::vector<double>(grid.size(), 0.0), time_stamp};
}

double WignerField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const WignerField& w) {
  double s = 0.0;
  for (double v : w.values) s += v * v;
  return std::sqrt(s * w.grid.dx() * w.grid.dk());
}

double l2_distance(const WignerField& a, const WignerField& b) {
  if (!(a.grid == b.grid)) throw PreconditionError("l2_distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s * a.grid.dx() * a.grid.dk());
}

double inner_product(const WignerField& a, const WignerField& b) {
  if (!(a.grid == b.grid)) throw PreconditionError("inner_product: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.dx() * a.grid.dk();
}

WignerField sample_function(const PhaseSpaceGrid& grid,
                            const std::function<double(double, double)>& f) {
  WignerField w = WignerField::zeros(grid);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_k; ++j) w.at(i, j) = f(grid.x(i), grid.k(j));
  return w;
}

WignerField make_gaussian(const PhaseSpaceGrid& grid, double x0, double k0, double sx,
                          double sk, double amp) {
  return sample_function(grid, [=](double x, double k) {
    const double u = (x - x0) / sx;
    const double v = (k - k0) / sk;
    return amp * std::exp(-0.5 * (u * u + v * v));
  });
}

double BilinearSampler::operator()(double x, double k, bool* wrapped) const {
  const auto& g = w_.grid;
  if (wrapped) *wrapped = x < -g.L_x || x >= g.L_x || k < -g.L_k || k >= g.L_k;
  const double fx = (x + g.L_x) / g.dx();
  const double fk = (k + g.L_k) / g.dk();
  const double ix = std::floor(fx);
  const double ik = std::floor(fk);
  const double tx = fx - ix;
  const double tk = fk - ik;
  const int i0 = wrap_index(static_cast<long>(ix), g.n_x);
  const int i1 = i0 + 1 == g.n_x ? 0 : i0 + 1;
  const int j0 = wrap_index(static_cast<long>(ik), g.n_k);
  const int j1 = j0 + 1 == g.n_k ? 0 : j0 + 1;
  return (1.0 - tx) * ((1.0 - tk) * w_.at(i0, j0) + tk * w_.at(i0, j1)) +
         tx * ((1.0 - tk) * w_.at(i1, j0) + tk * w_.at(i1, j1));
}

void write_field_csv(const std::filesystem::path& path, const WignerField& w,
                     const std::vector<double>* stderr_values,
                     const std::map<std::string, std::string>& extra_metadata) {
  if (stderr_values && stderr_values->size() != w.values.size())
    throw PreconditionError("write_field_csv: stderr column has the wrong length");
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  const auto& g = w.grid;
  std::fprintf(f.get(), "# n_x=%d,n_k=%d,L_x=%.17g,L_k=%.17g,time_stamp=%.17g", g.n_x, g.n_k,
               g.L_x, g.L_k, w.time_stamp);
  for (const auto& [key, value] : extra_metadata)
    std::fprintf(f.get(), ",%s=%s", key.c_str(), value.c_str());
  std::fputs(stderr_values ? "\nx,k,value,stderr\n" : "\nx,k,value\n", f.get());
  for (int i = 0; i < g.n_x; ++i) {
    for (int j = 0; j < g.n_k; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * g.n_k + j;
      if (stderr_values)
        std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g\n", g.x(i), g.k(j), w.values[idx],
                     (*stderr_values)[idx]);
      else
        std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", g.x(i), g.k(j), w.values[idx]);
    }
  }
  if (std::ferror(f.get())) throw Error("write error on " + path.string());
}

WignerField read_field_csv(const std::filesystem::path& path,
                           std::vector<double>* stderr_values) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw Error(path.string() + ": missing metadata line");
  std::map<std::string, std::string> meta;
  {
    std::istringstream ss(line.substr(2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq != std::string::npos) meta[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto need = [&](const char* key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw Error(path.string() + ": metadata lacks " + key);
    return it->second;
  };
  WignerField w;
  w.grid.n_x = std::stoi(need("n_x"));
  w.grid.n_k = std::stoi(need("n_k"));
  w.grid.L_x = std::strtod(need("L_x").c_str(), nullptr);
  w.grid.L_k = std::strtod(need("L_k").c_str(), nullptr);
  w.time_stamp = std::strtod(need("time_stamp").c_str(), nullptr);
  w.grid.validate();
  w.values.assign(w.grid.size(), 0.0);

  if (!std::getline(in, line)) throw Error(path.string() + ": missing header");
  const bool has_stderr = line == "x,k,value,stderr";
  if (!has_stderr && line != "x,k,value") throw Error(path.string() + ": unexpected header");
  if (stderr_values) stderr_values->assign(has_stderr ? w.grid.size() : 0, 0.0);

  for (std::size_t idx = 0; idx < w.grid.size(); ++idx) {
    if (!std::getline(in, line)) throw Error(path.string() + ": truncated data");
    const char* p = line.c_str();
    char* end = nullptr;
    std::strtod(p, &end);
    if (*end != ',') throw Error(path.string() + ": malformed row");
    std::strtod(end + 1, &end);
    if (*end != ',') throw Error(path.string() + ": malformed row");
    w.values[idx] = std::strtod(end + 1, &end);
    if (has_stderr) {
      if (*end != ',') throw Error(path.string() + ": malformed row");
      const double s = std::strtod(end + 1, &end);
      if (stderr_values) (*stderr_values)[idx] = s;
    }
  }
  return w;
}

}  // namespace lrk
