#include "lrk/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <boost/version.hpp>
#include <fftw3.h>
#include <json.hpp>

#include "lrk/collision_series.hpp"
#include "lrk/error.hpp"
#include "lrk/field_synthesis.hpp"
#include "lrk/fractional_limit.hpp"
#include "lrk/kinetic_fourier.hpp"
#include "lrk/levy_mc.hpp"
#include "lrk/parallel.hpp"
#include "lrk/phase_constants.hpp"
#include "lrk/schrodinger_wigner.hpp"

#ifndef LRK_VERSION
#define LRK_VERSION "unknown"
#endif

namespace lrk {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw PreconditionError("cannot write '" + p.string() + "'");
  return f;
}

struct Artifacts {
  std::filesystem::path dir;
  std::vector<std::string> files;

  std::filesystem::path add(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
};

std::function<double(double, double)> initial_function(const ExperimentConfig& cfg,
                                                       const WignerField& w0) {
  const auto& r = cfg.run;
  if (r.initial_field.empty()) {
    return [r](double x, double k) {
      const double a = (x - r.w0_x0) / r.w0_sx, b = (k - r.w0_k0) / r.w0_sk;
      return r.w0_amp * std::exp(-0.5 * (a * a + b * b));
    };
  }
  auto sampler = std::make_shared<BilinearSampler>(w0);
  return [sampler, &w0](double x, double k) { return (*sampler)(x, k); };
}

void write_table(const std::filesystem::path& p, const std::string& header,
                 const std::vector<std::vector<std::string>>& rows) {
  auto f = open_out(p);
  f << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << "\n";
  }
}

void run_constants(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const auto& m = cfg.model;
  const PhaseScaling ps = compute_scaling(m.alpha, m.beta, cfg.run.gamma, m.a0, m.nu, m.dimension);
  const FractionalModel fm = sigma_theta_constant(JumpMeasure(m));
  const DecorrelationReport dec = classify_decorrelation(m);
  const char* cls = dec.status == DecorrelationClass::long_range    ? "long_range"
                    : dec.status == DecorrelationClass::short_range ? "short_range"
                                                                    : "inconclusive";
  std::vector<std::vector<std::string>> rows{
      {"kappa0", fmt(ps.kappa0)},
      {"kappa_gamma", fmt(ps.kappa_gamma)},
      {"D", fmt(ps.D)},
      {"omega_d", fmt(ps.omega_d)},
      {"rho_integral", fmt(ps.rho_integral)},
      {"phase_scale_exponent", fmt(1.0 / (2.0 * ps.kappa_gamma))},
      {"theta", fmt(m.theta())},
      {"c_theta", fmt(fm.c_theta)},
      {"closed_form_constant", fmt(fm.closed_form_constant)},
      {"standard_constant", fmt(fm.standard_constant)},
      {"ratio_to_closed_form", fmt(fm.ratio_to_closed_form)},
      {"fitted_slope", fmt(fm.fitted_slope)},
      {"decorrelation", cls},
      {"decorrelation_exponent", fmt(dec.fitted_exponent)},
  };
  write_table(art.add("constants.csv"), "name,value", rows);
  for (const auto& r : rows) log << r[0] << std::string(24 - std::min<std::size_t>(23, r[0].size()), ' ') << r[1] << "\n";
}

void run_synth_field(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const auto& r = cfg.run;
  FieldState f = init_field(cfg.model, r.field_n, r.field_L, r.seed);
  for (int s = 0; s < r.field_steps; ++s) advance_field(f, r.field_dt);
  double residue = 0.0;
  const auto v = realize_potential(f, &residue);
  auto out = open_out(art.add("field.csv"));
  out << "# n=" << f.n << ",L=" << fmt(f.L) << ",time=" << fmt(f.time) << ",seed=" << f.seed
      << ",steps=" << f.step << "\n";
  out << "x,V\n";
  for (int i = 0; i < f.n; ++i) out << fmt(f.x(i)) << "," << fmt(v[i]) << "\n";
  log << "field: n=" << f.n << " time=" << f.time << " variance(model)=" << potential_variance(f)
      << " imaginary residue=" << residue << "\n";
}

void run_fourier(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const WignerField w0 = initial_field(cfg);
  FlowDiagnostics diag;
  const WignerField w = solve_fourier(w0, JumpMeasure(cfg.model), cfg.run.t, {}, &diag);
  write_field_csv(art.add("fourier.csv"), w, nullptr,
                  {{"solver", "fourier"}, {"alias_fraction", fmt(diag.alias_fraction)}});
  log << "fourier: t=" << cfg.run.t << " |W0|=" << l2_norm(w0) << " |W|=" << l2_norm(w)
      << " alias fraction=" << diag.alias_fraction << "\n";
}

void run_mc(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const WignerField w0 = initial_field(cfg);
  const auto& r = cfg.run;
  const McField f = estimate_field(w0, r.t, JumpMeasure(cfg.model), r.delta, r.n_paths, r.seed);
  write_field_csv(art.add("mc.csv"), f.mean, &f.std_error,
                  {{"solver", "mc"},
                   {"delta", fmt(r.delta)},
                   {"n_paths", std::to_string(f.n_paths)},
                   {"seed", std::to_string(r.seed)},
                   {"wrapped_evaluations", std::to_string(f.wrapped_evaluations)}});
  const double max_se = *std::max_element(f.std_error.begin(), f.std_error.end());
  log << "mc: paths=" << f.n_paths << " delta=" << r.delta << " max stderr=" << max_se
      << " wrapped evaluations=" << f.wrapped_evaluations << "\n";
}

void run_series(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const WignerField w0 = initial_field(cfg);
  const auto& r = cfg.run;
  SeriesConfig sc{r.cutoff_N, r.n_max, r.time_quad_order, r.p_quad_order};
  const auto lambda = initial_function(cfg, w0);
  const SeriesFieldResult s =
      solve_series(lambda, w0.max_abs(), w0.grid, JumpMeasure(cfg.model), sc, r.t);
  write_field_csv(art.add("series.csv"), s.field, nullptr,
                  {{"solver", "series"},
                   {"cutoff_N", std::to_string(r.cutoff_N)},
                   {"n_max", std::to_string(r.n_max)},
                   {"tail_bound", fmt(s.tail_bound)}});
  log << "series: N=" << r.cutoff_N << " n_max=" << r.n_max << " tail bound=" << s.tail_bound << "\n";
}

void run_fractional(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const WignerField w0 = initial_field(cfg);
  const FractionalModel fm = sigma_theta_constant(JumpMeasure(cfg.model));
  const WignerField w = solve_fractional(w0, fm, cfg.run.t);
  write_field_csv(art.add("fractional.csv"), w, nullptr,
                  {{"solver", "fractional"}, {"theta", fmt(fm.theta)}, {"c_theta", fmt(fm.c_theta)}});
  log << "fractional: theta=" << fm.theta << " c_theta=" << fm.c_theta << "\n";
}

void run_eta_sweep(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const WignerField w0 = initial_field(cfg);
  const EtaReport rep = eta_convergence_report(w0, cfg.model, cfg.run.t, cfg.run.etas);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : rep.rows) {
    rows.push_back({fmt(row.eta), fmt(row.l2_error), fmt(row.runtime_seconds)});
    log << "eta=" << row.eta << " relative L2 error=" << row.l2_error << "\n";
  }
  write_table(art.add("eta_report.csv"), "eta,l2_error,runtime_seconds", rows);
  log << "strictly decreasing: " << (rep.strictly_decreasing ? "yes" : "no") << "\n";
}

KineticExperimentConfig experiment_config(const ExperimentConfig& cfg) {
  KineticExperimentConfig k;
  k.model = cfg.model;
  k.grid = cfg.grid;
  k.t = cfg.run.t;
  k.gamma = cfg.run.gamma;
  k.epsilons = cfg.run.epsilons;
  k.n_potentials = cfg.run.n_potentials;
  k.n_mixture = cfg.run.n_mixture;
  k.x0 = cfg.run.w0_x0;
  k.position_width = cfg.run.position_width;
  k.k0 = cfg.run.momentum_center;
  k.momentum_width = cfg.run.momentum_width;
  k.seed = cfg.run.seed;
  k.split.freeze_potential = cfg.run.freeze_potential;
  return k;
}

void run_schrodinger(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const KineticExperimentResult res = kinetic_limit_experiment(experiment_config(cfg));
  std::vector<std::vector<std::string>> rows, summary;
  for (const auto& row : res.rows) {
    for (int j = 0; j < kTestFunctionCount; ++j)
      rows.push_back({fmt(row.epsilon), std::to_string(j), fmt(row.schrodinger[j]),
                      fmt(row.kinetic[j]), fmt(row.ensemble_std[j]), fmt(row.D)});
    summary.push_back({fmt(row.epsilon), std::to_string(row.n_wave_points),
                       std::to_string(row.n_steps), fmt(row.D), fmt(row.runtime_seconds)});
    log << "epsilon=" << row.epsilon << " D=" << row.D << " steps=" << row.n_steps << "\n";
  }
  write_table(art.add("kinetic_limit.csv"),
              "epsilon,observable_id,value_schrodinger,value_kinetic,ensemble_std,D_epsilon", rows);
  write_table(art.add("kinetic_limit_summary.csv"), "epsilon,n_wave_points,n_steps,D_epsilon,runtime_seconds",
              summary);
  log << "D decreasing: " << (res.D_decreasing ? "yes" : "no")
      << ", ensemble spread decreasing: " << (res.spread_decreasing ? "yes" : "no") << "\n";
}

void run_solve(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  switch (cfg.solver) {
    case SolverKind::fourier: return run_fourier(cfg, art, log);
    case SolverKind::mc: return run_mc(cfg, art, log);
    case SolverKind::series: return run_series(cfg, art, log);
    case SolverKind::fractional: return run_fractional(cfg, art, log);
    case SolverKind::schrodinger: return run_schrodinger(cfg, art, log);
  }
}

void write_manifest(const std::string& command, const ExperimentConfig& cfg, const Artifacts& art,
                    double seconds, int status) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = LRK_VERSION;
  j["seed"] = cfg.run.seed;
  j["threads"] = default_threads();
  j["exit_status"] = status;
  j["wall_time_seconds"] = seconds;
  j["outputs"] = art.files;
  j["config"] = echo_config(cfg);
  j["libraries"]["boost"] = BOOST_LIB_VERSION;
  j["libraries"]["fftw"] = std::string(fftw_version);
  auto f = open_out(art.dir / "manifest.json");
  f << j.dump(2) << "\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"constants", "synth-field", "solve",
                                              "mc",        "series",      "fractional",
                                              "eta-sweep", "schrodinger", "cross-validate"};
  return names;
}

WignerField initial_field(const ExperimentConfig& cfg) {
  const auto& r = cfg.run;
  if (!r.initial_field.empty()) return read_field_csv(r.initial_field);
  return make_gaussian(cfg.grid, r.w0_x0, r.w0_k0, r.w0_sx, r.w0_sk, r.w0_amp);
}

std::vector<std::pair<int, int>> probe_points(const ExperimentConfig& cfg, const PhaseSpaceGrid& g) {
  const auto& r = cfg.run;
  std::vector<std::pair<int, int>> out;
  const double xc = r.w0_x0 + r.t * r.w0_k0;
  const int nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(1.25 * r.probes))));
  const int nk = (r.probes + nx - 1) / nx;
  for (int a = 0; a < nx && static_cast<int>(out.size()) < r.probes; ++a) {
    for (int b = 0; b < nk && static_cast<int>(out.size()) < r.probes; ++b) {
      const double ux = nx == 1 ? 0.0 : -1.2 + 2.4 * a / (nx - 1);
      const double uk = nk == 1 ? 0.0 : -0.9 + 1.8 * b / (nk - 1);
      const double x = xc + r.w0_sx * ux, k = r.w0_k0 + r.w0_sk * uk;
      int ix = static_cast<int>(std::lround((x + g.L_x) / g.dx()));
      int ik = static_cast<int>(std::lround((k + g.L_k) / g.dk()));
      ix = ((ix % g.n_x) + g.n_x) % g.n_x;
      ik = std::clamp(ik, 0, g.n_k - 1);
      out.emplace_back(ix, ik);
    }
  }
  return out;
}

std::vector<CrossCheck> cross_validate(const ExperimentConfig& cfg, std::ostream& log) {
  const auto& r = cfg.run;
  const auto& tol = cfg.tolerance;
  const WignerField w0 = initial_field(cfg);
  const auto lambda = initial_function(cfg, w0);
  const double sup = w0.max_abs();
  const JumpMeasure jump(cfg.model);
  const auto probes = probe_points(cfg, w0.grid);
  std::vector<CrossCheck> out;
  auto record = [&](std::string name, double value, double budget) {
    out.push_back({std::move(name), value, budget, value <= budget});
    const auto& c = out.back();
    log << c.name << ": " << c.value << " (budget " << c.budget << ") " << (c.pass ? "PASS" : "FAIL")
        << "\n";
  };

  const WignerField fourier = solve_fourier(w0, jump, r.t);
  record("l2_nonexpansion", l2_norm(fourier) - l2_norm(w0), tol.norm_slack);

  const McField mc = estimate_field(w0, r.t, jump, r.delta, r.n_paths, r.seed);
  double sq = 0.0;
  for (std::size_t i = 0; i < mc.mean.values.size(); ++i) {
    const double d = mc.mean.values[i] - fourier.values[i];
    sq += d * d;
  }
  record("fourier_vs_mc_rmse", std::sqrt(sq / mc.mean.values.size()) / sup, tol.mc_rmse_fraction);
  double worst = 0.0;
  for (auto [ix, ik] : probes) {
    const std::size_t i = static_cast<std::size_t>(ix) * w0.grid.n_k + ik;
    const double allowed = std::max(tol.stderr_multiple * mc.std_error[i], tol.mc_point_fraction * sup);
    worst = std::max(worst, std::abs(mc.mean.values[i] - fourier.values[i]) / allowed);
  }
  record("fourier_vs_mc_probes", worst, 1.0);

  const SeriesConfig sc{r.cutoff_N, r.n_max, r.time_quad_order, r.p_quad_order};
  const CollisionSeries series(jump, sc);
  std::vector<double> ratio(probes.size());
  parallel_for(probes.size(), [&](std::size_t p) {
    const double x = w0.grid.x(probes[p].first), k = w0.grid.k(probes[p].second);
    const auto s = series.evaluate(lambda, x, k, r.t, sup);
    const auto m = estimate_point(lambda, x, k, r.t, jump, 1.0 / r.cutoff_N, r.n_paths,
                                  r.seed + 1 + p);
    ratio[p] = std::abs(s.value - m.mean) / (tol.stderr_multiple * m.std_error + s.tail_bound);
  });
  record("series_vs_mc_probes", *std::max_element(ratio.begin(), ratio.end()), 1.0);

  const EtaReport eta = eta_convergence_report(w0, cfg.model, r.t, r.etas);
  log << "eta errors:";
  for (const auto& row : eta.rows) log << " " << row.l2_error;
  log << "\n";
  record("fractional_eta_nonmonotone", eta.strictly_decreasing ? 0.0 : 1.0, 0.0);

  SpectrumModel free_model = cfg.model;
  free_model.a0 = 0.0;
  const JumpMeasure free_jump(free_model);
  const WignerField free_f = solve_fourier(w0, free_jump, r.t);
  const WignerField shear = free_transport(w0, r.t);
  double free_err = l2_distance(free_f, shear) / std::max(l2_norm(w0), 1e-300);
  for (auto [ix, ik] : probes) {
    const double x = w0.grid.x(ix), k = w0.grid.k(ik);
    const auto m = estimate_point(lambda, x, k, r.t, free_jump, r.delta, 16, r.seed);
    const auto s = CollisionSeries(free_jump, sc).evaluate(lambda, x, k, r.t, sup);
    const double exact = shear.at(ix, ik);
    free_err = std::max({free_err, std::abs(m.mean - exact) / sup, std::abs(s.value - exact) / sup});
  }
  record("free_transport_reduction", free_err, tol.free_limit);
  return out;
}

int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  Artifacts art{cfg.output_dir, {}};
  std::filesystem::create_directories(art.dir);
  ExperimentConfig c = cfg;
  int status = 0;
  if (command == "constants") {
    run_constants(c, art, log);
  } else if (command == "synth-field") {
    run_synth_field(c, art, log);
  } else if (command == "solve") {
    run_solve(c, art, log);
  } else if (command == "mc" || command == "series" || command == "fractional" ||
             command == "schrodinger") {
    c.solver = command == "mc"           ? SolverKind::mc
               : command == "series"     ? SolverKind::series
               : command == "fractional" ? SolverKind::fractional
                                         : SolverKind::schrodinger;
    if (c.solver == SolverKind::schrodinger) {
      const auto v = config_violations(c);
      if (!v.empty()) throw ConfigError(v);
    }
    run_solve(c, art, log);
  } else if (command == "eta-sweep") {
    run_eta_sweep(c, art, log);
  } else if (command == "cross-validate") {
    const auto checks = cross_validate(c, log);
    std::vector<std::vector<std::string>> rows;
    for (const auto& ch : checks) {
      rows.push_back({ch.name, fmt(ch.value), fmt(ch.budget), ch.pass ? "pass" : "fail"});
      if (!ch.pass) status = 1;
    }
    write_table(art.add("cross_validation.csv"), "check,value,budget,result", rows);
  } else {
    throw PreconditionError("unknown command '" + command + "'");
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  write_manifest(command, c, art, seconds, status);
  return status;
}

}  // namespace lrk
