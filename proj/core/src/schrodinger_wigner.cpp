#include "lrk/schrodinger_wigner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrk/error.hpp"
#include "lrk/kinetic_fourier.hpp"
#include "lrk/parallel.hpp"
#include "lrk/rng.hpp"

namespace lrk {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

double max_gap(const FieldState& f) {
  double g = 0.0;
  for (int j = 0; j < f.mode_count(); ++j)
    if (f.variance[j] > 0.0) g = std::max(g, f.gap[j]);
  return g;
}

// exp(-i (eps/2) xi^2 tau) / n on the FFT bins of the wave grid.
std::vector<cplx> kinetic_multiplier(int n, double dx, double epsilon, double tau) {
  std::vector<cplx> m(n);
  const double dxi = 2.0 * kPi / (n * dx);
  for (int j = 0; j < n; ++j) {
    const double xi = fft_index(j, n) * dxi;
    m[j] = std::polar(1.0 / n, -0.5 * epsilon * xi * xi * tau);
  }
  return m;
}

void apply_multiplier(std::vector<cplx>& psi, const std::vector<cplx>& m, const Fft1D& fft) {
  fft.forward(psi.data());
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= m[j];
  fft.backward(psi.data());
}

}  // namespace

double wave_norm(const WaveField& w) {
  double s = 0.0;
  for (const auto& v : w.psi) s += std::norm(v);
  return std::sqrt(s * w.dx());
}

void MixtureConfig::validate() const {
  if (k_nodes.empty() || k_nodes.size() != weights.size())
    throw PreconditionError("mixture: k_nodes and weights must be nonempty and of equal length");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw PreconditionError("mixture: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw PreconditionError("mixture: weights must sum to 1");
  if (!base_profile) throw PreconditionError("mixture: base profile is missing");
}

int field_substeps(const WaveField& wave, const FieldState* field, double dt_slow,
                   const SplitStepOptions& opts) {
  if (!(dt_slow > 0.0)) throw PreconditionError("split step: dt must be positive");
  const double xi_max = kPi / wave.dx();
  const double phase = 0.5 * wave.epsilon * xi_max * xi_max * dt_slow;
  if (!(phase < opts.max_kinetic_phase)) {
    std::ostringstream os;
    os << "split step: kinetic phase epsilon k_max^2 dt / 2 = " << phase << " must stay below "
       << opts.max_kinetic_phase;
    throw PreconditionError(os.str());
  }
  if (!field || opts.freeze_potential) return 1;
  const double dt_fast = dt_slow / std::pow(wave.epsilon, 1.0 + wave.gamma);
  const double g = max_gap(*field);
  return std::max(1, static_cast<int>(std::ceil(g * dt_fast / opts.max_gap_step)));
}

void split_step_evolve(std::vector<WaveField>& waves, FieldState* field, double dt_slow,
                       int n_steps, const SplitStepOptions& opts) {
  if (n_steps < 0) throw PreconditionError("split step: n_steps must be nonnegative");
  if (waves.empty() || n_steps == 0) return;
  const WaveField& w0 = waves.front();
  const int n = w0.n();
  if (!is_power_of_two(n)) throw PreconditionError("split step: wave grid size must be a power of two");
  for (const auto& w : waves)
    if (w.n() != n || w.L != w0.L || w.epsilon != w0.epsilon || w.gamma != w0.gamma)
      throw PreconditionError("split step: waves must share grid and scaling");
  if (!(w0.epsilon > 0.0)) throw PreconditionError("split step: epsilon must be positive");
  if (!(w0.gamma > 0.0 && w0.gamma < 1.0))
    throw PreconditionError("split step: gamma must lie in the open interval (0, 1)");
  if (field && (field->n != n || std::abs(field->L * w0.epsilon - w0.L) > 1e-12 * w0.L))
    throw PreconditionError("split step: field grid must be the wave grid scaled by 1/epsilon");

  const int n_sub = field_substeps(w0, field, dt_slow, opts);
  const double coupling = std::pow(w0.epsilon, -0.5 * (1.0 + w0.gamma));
  const double dt_fast = dt_slow / std::pow(w0.epsilon, 1.0 + w0.gamma) / n_sub;

  const Fft1D fft(n);
  const auto half = kinetic_multiplier(n, w0.dx(), w0.epsilon, 0.5 * dt_slow);
  const auto full = kinetic_multiplier(n, w0.dx(), w0.epsilon, dt_slow);

  std::vector<double> phase(n, 0.0);
  std::vector<cplx> rotation(n, cplx(1.0));
  std::vector<double> frozen;
  if (field && opts.freeze_potential) frozen = realize_potential(*field);

  for (auto& w : waves) apply_multiplier(w.psi, half, fft);
  for (int s = 0; s < n_steps; ++s) {
    if (field) {
      std::fill(phase.begin(), phase.end(), 0.0);
      for (int sub = 0; sub < n_sub; ++sub) {
        if (opts.freeze_potential) {
          for (int i = 0; i < n; ++i) phase[i] += frozen[i];
          continue;
        }
        advance_field(*field, 0.5 * dt_fast);
        const auto v = realize_potential(*field);
        for (int i = 0; i < n; ++i) phase[i] += v[i];
        advance_field(*field, 0.5 * dt_fast);
      }
      const double scale = -coupling * dt_slow / n_sub;
      for (int i = 0; i < n; ++i) rotation[i] = std::polar(1.0, scale * phase[i]);
      for (auto& w : waves)
        for (int i = 0; i < n; ++i) w.psi[i] *= rotation[i];
    }
    const auto& m = s + 1 == n_steps ? half : full;
    for (auto& w : waves) apply_multiplier(w.psi, m, fft);
  }
  for (auto& w : waves) w.time += n_steps * dt_slow;
}

void split_step_evolve(WaveField& wave, FieldState* field, double dt_slow, int n_steps,
                       const SplitStepOptions& opts) {
  std::vector<WaveField> one{std::move(wave)};
  try {
    split_step_evolve(one, field, dt_slow, n_steps, opts);
  } catch (...) {
    wave = std::move(one.front());
    throw;
  }
  wave = std::move(one.front());
}

int admissible_wave_points(const PhaseSpaceGrid& grid, double epsilon) {
  grid.validate();
  if (!(epsilon > 0.0)) throw PreconditionError("schrodinger: epsilon must be positive");
  const double n = 4.0 * grid.L_x * grid.L_k / (kPi * epsilon);
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * n || r > 1 << 26 || !is_power_of_two(static_cast<long long>(r)) ||
      r < grid.n_x) {
    std::ostringstream os;
    os << "schrodinger: epsilon " << epsilon << " is not admissible for this grid: 4 L_x L_k / (pi epsilon) = "
       << n << " must be a power of two no smaller than n_x = " << grid.n_x;
    throw PreconditionError(os.str());
  }
  return static_cast<int>(r);
}

WignerAccumulator::WignerAccumulator(const PhaseSpaceGrid& grid, double epsilon)
    : grid_(grid), epsilon_(epsilon), n_wave_(admissible_wave_points(grid, epsilon)),
      corr_(grid.size(), cplx(0.0)) {}

void WignerAccumulator::add(const WaveField& wave, double weight) {
  if (wave.n() != n_wave_ || std::abs(wave.L - grid_.L_x) > 1e-12 * grid_.L_x)
    throw PreconditionError("wigner: wave grid does not match the admissible lattice");
  const int nk = grid_.n_k, n = n_wave_;
  const int stride = n / grid_.n_x;
  for (int ix = 0; ix < grid_.n_x; ++ix) {
    const int c = ix * stride;
    cplx* row = corr_.data() + static_cast<std::size_t>(ix) * nk;
    for (int m = -nk / 2; m < nk / 2; ++m) {
      const int a = ((c - m) % n + n) % n;
      const int b = ((c + m) % n + n) % n;
      row[(m + nk) % nk] += weight * wave.psi[a] * std::conj(wave.psi[b]);
    }
  }
}

WignerField WignerAccumulator::result(double time_stamp, double* imaginary_residue) const {
  const int nk = grid_.n_k;
  const Fft1D fft(nk);
  WignerField w = WignerField::zeros(grid_, time_stamp);
  std::vector<cplx> row(nk);
  const double scale = grid_.dy() / (2.0 * kPi);
  double max_re = 0.0, max_im = 0.0;
  for (int ix = 0; ix < grid_.n_x; ++ix) {
    const cplx* src = corr_.data() + static_cast<std::size_t>(ix) * nk;
    for (int j = 0; j < nk; ++j) {
      const int m = fft_index(j, nk);
      cplx v = src[j];
      if (m == -nk / 2) v = v.real();
      row[j] = (m % 2 == 0 ? 1.0 : -1.0) * v;
    }
    fft.backward(row.data());
    for (int l = 0; l < nk; ++l) {
      const cplx v = scale * row[l];
      w.at(ix, l) = v.real();
      max_re = std::max(max_re, std::abs(v.real()));
      max_im = std::max(max_im, std::abs(v.imag()));
    }
  }
  const double residue = max_re > 0.0 ? max_im / max_re : 0.0;
  if (imaginary_residue) *imaginary_residue = residue;
  if (residue > 1e-10)
    throw InternalError("wigner: averaged transform is not real (residue " + std::to_string(residue) + ")");
  return w;
}

WignerField wigner_transform(const std::vector<WaveField>& waves,
                             const std::vector<double>& weights, const PhaseSpaceGrid& grid,
                             double* imaginary_residue) {
  if (waves.empty() || waves.size() != weights.size())
    throw PreconditionError("wigner: waves and weights must be nonempty and of equal length");
  WignerAccumulator acc(grid, waves.front().epsilon);
  for (std::size_t i = 0; i < waves.size(); ++i) acc.add(waves[i], weights[i]);
  return acc.result(waves.front().time, imaginary_residue);
}

double TestFunction::operator()(double x, double k) const {
  const double a = (x - x0) / sx, b = (k - k0) / sk;
  return std::exp(-0.5 * (a * a + b * b));
}

const std::array<TestFunction, kTestFunctionCount>& test_library() {
  static const std::array<TestFunction, kTestFunctionCount> lib{{
      {0.5, 1.0, 1.0, 0.5},   {0.0, 1.0, 1.0, 0.5},   {1.0, 1.0, 1.0, 0.5},
      {0.5, 0.5, 1.0, 0.5},   {0.5, 1.5, 1.0, 0.5},   {0.5, 1.0, 0.5, 0.25},
      {-0.5, 1.0, 0.5, 0.5},  {1.5, 1.0, 0.5, 0.5},   {0.5, 0.0, 1.0, 0.5},
      {0.5, 2.0, 1.0, 0.5},   {0.5, 1.0, 2.0, 1.0},   {-1.5, 0.5, 1.0, 1.0},
      {2.5, 1.5, 1.0, 1.0},   {0.5, -1.0, 1.0, 1.0},  {0.5, 3.0, 1.0, 1.0},
      {0.0, 0.0, 3.0, 2.0},
  }};
  return lib;
}

double weak_observable(const WignerField& w, int test_id) {
  if (test_id < 0 || test_id >= kTestFunctionCount)
    throw PreconditionError("weak_observable: test id out of range");
  const auto& g = test_library()[test_id];
  double s = 0.0;
  for (int i = 0; i < w.grid.n_x; ++i)
    for (int j = 0; j < w.grid.n_k; ++j) s += w.at(i, j) * g(w.grid.x(i), w.grid.k(j));
  return s * w.grid.dx() * w.grid.dk();
}

double weak_distance(const WignerField& a, const WignerField& b) {
  if (!(a.grid == b.grid)) throw PreconditionError("weak_distance: grids differ");
  double d = 0.0, weight = 0.5;
  for (int j = 0; j < kTestFunctionCount; ++j, weight *= 0.5)
    d += weight * std::abs(weak_observable(a, j) - weak_observable(b, j));
  return d;
}

MixtureConfig make_mixture(const KineticExperimentConfig& cfg) {
  const auto& g = cfg.grid;
  if (cfg.n_mixture < 1 || cfg.n_mixture > g.n_k)
    throw PreconditionError("mixture: n_mixture must lie in [1, n_k]");
  if (!(cfg.position_width > 0.0) || !(cfg.momentum_width > 0.0))
    throw PreconditionError("mixture: widths must be positive");
  const int centre = static_cast<int>(std::lround((cfg.k0 + g.L_k) / g.dk()));
  const int first = std::clamp(centre - cfg.n_mixture / 2, 0, g.n_k - cfg.n_mixture);
  MixtureConfig mix;
  double sum = 0.0;
  for (int l = first; l < first + cfg.n_mixture; ++l) {
    const double k = g.k(l), z = (k - cfg.k0) / cfg.momentum_width;
    mix.k_nodes.push_back(k);
    mix.weights.push_back(std::exp(-0.5 * z * z));
    sum += mix.weights.back();
  }
  for (double& w : mix.weights) w /= sum;
  const double s = cfg.position_width, x0 = cfg.x0;
  const double amp = std::pow(2.0 * kPi * s * s, -0.25);
  mix.base_profile = [=](double x) {
    const double z = x - x0;
    return cplx(amp * std::exp(-z * z / (4.0 * s * s)));
  };
  return mix;
}

WignerField mixture_limit(const KineticExperimentConfig& cfg) {
  const double s = cfg.position_width, m = cfg.momentum_width;
  return make_gaussian(cfg.grid, cfg.x0, cfg.k0, s, m, 1.0 / (2.0 * kPi * s * m));
}

KineticExperimentResult kinetic_limit_experiment(const KineticExperimentConfig& cfg) {
  cfg.model.validate();
  if (cfg.model.dimension != 1) throw PreconditionError("schrodinger: only dimension 1 is supported");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
    throw PreconditionError("run.gamma: must lie in the open interval (0, 1)");
  if (!(cfg.t >= 0.0)) throw PreconditionError("schrodinger: t must be nonnegative");
  if (cfg.n_potentials < 2) throw PreconditionError("schrodinger: n_potentials must be at least 2");
  for (double eps : cfg.epsilons) admissible_wave_points(cfg.grid, eps);

  KineticExperimentResult out;
  out.kinetic = solve_fourier(mixture_limit(cfg), JumpMeasure(cfg.model), cfg.t);
  std::array<double, kTestFunctionCount> kinetic_obs{};
  for (int j = 0; j < kTestFunctionCount; ++j) kinetic_obs[j] = weak_observable(out.kinetic, j);

  const MixtureConfig mix = make_mixture(cfg);
  const bool has_potential = cfg.model.a0 != 0.0;
  for (double eps : cfg.epsilons) {
    const auto start = std::chrono::steady_clock::now();
    EpsilonResult row;
    row.epsilon = eps;
    row.n_wave_points = admissible_wave_points(cfg.grid, eps);
    const int n = row.n_wave_points;
    const double L = cfg.grid.L_x;
    const double dx = 2.0 * L / n;
    const double xi_max = kPi / dx;
    const double dt_limit = 2.0 * cfg.split.max_kinetic_phase / (eps * xi_max * xi_max);
    row.n_steps = cfg.t > 0.0 ? static_cast<int>(std::floor(cfg.t / dt_limit)) + 1 : 0;
    const double dt = row.n_steps > 0 ? cfg.t / row.n_steps : 0.0;

    std::vector<WignerField> per(cfg.n_potentials);
    parallel_for(static_cast<std::size_t>(cfg.n_potentials), [&](std::size_t r) {
      std::vector<WaveField> waves(mix.k_nodes.size());
      for (std::size_t l = 0; l < waves.size(); ++l) {
        auto& w = waves[l];
        w.L = L;
        w.epsilon = eps;
        w.gamma = cfg.gamma;
        w.psi.resize(n);
        for (int i = 0; i < n; ++i) {
          const double x = -L + i * dx;
          w.psi[i] = mix.base_profile(x) * std::polar(1.0, mix.k_nodes[l] * x / eps);
        }
      }
      if (has_potential) {
        CounterRng rng(cfg.seed, r, StreamDomain::potential_ensemble);
        FieldState field = init_field(cfg.model, n, L / eps, rng.next_u64());
        split_step_evolve(waves, &field, dt, row.n_steps, cfg.split);
      } else {
        split_step_evolve(waves, nullptr, dt, row.n_steps, cfg.split);
      }
      WignerAccumulator acc(cfg.grid, eps);
      for (std::size_t l = 0; l < waves.size(); ++l) acc.add(waves[l], mix.weights[l]);
      per[r] = acc.result(cfg.t);
    });

    std::vector<std::array<double, kTestFunctionCount>> obs(per.size());
    for (std::size_t r = 0; r < per.size(); ++r)
      for (int j = 0; j < kTestFunctionCount; ++j) obs[r][j] = weak_observable(per[r], j);
    WignerField mean = tree_reduce(per, [](WignerField a, WignerField b) {
      for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
      return a;
    });
    for (double& v : mean.values) v /= cfg.n_potentials;
    for (int j = 0; j < kTestFunctionCount; ++j) {
      double m = 0.0;
      for (const auto& o : obs) m += o[j];
      m /= obs.size();
      double var = 0.0;
      for (const auto& o : obs) var += (o[j] - m) * (o[j] - m);
      row.ensemble_std[j] = std::sqrt(var / (obs.size() - 1));
      row.schrodinger[j] = weak_observable(mean, j);
      row.kinetic[j] = kinetic_obs[j];
    }
    row.D = weak_distance(mean, out.kinetic);
    row.wigner = std::move(mean);
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.rows.empty()) {
      const auto& prev = out.rows.back();
      if (!(row.D < prev.D)) out.D_decreasing = false;
      for (int j = 0; j < kTestFunctionCount; ++j)
        if (!(row.ensemble_std[j] < prev.ensemble_std[j])) out.spread_decreasing = false;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace lrk
