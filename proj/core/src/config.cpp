#include "lrk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lrk/schrodinger_wigner.hpp"

extern char** environ;

namespace lrk {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string format17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::optional<double> to_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_integer(const std::string& s) {
  const std::string t = trim(s);
  Int v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

struct Binding {
  std::string key;
  std::function<std::optional<std::string>(const std::string&)> set;
  std::function<std::string()> get;
};

Binding entry(std::string key, double& ref) {
  return {key,
          [&ref, key](const std::string& v) -> std::optional<std::string> {
            auto d = to_double(v);
            if (!d) return key + ": expected a number, got '" + v + "'";
            ref = *d;
            return std::nullopt;
          },
          [&ref] { return format17(ref); }};
}

template <class Int>
Binding entry_int(std::string key, Int& ref) {
  return {key,
          [&ref, key](const std::string& v) -> std::optional<std::string> {
            auto d = to_integer<Int>(v);
            if (!d) return key + ": expected an integer, got '" + v + "'";
            ref = *d;
            return std::nullopt;
          },
          [&ref] { return std::to_string(ref); }};
}

Binding entry(std::string key, std::vector<double>& ref) {
  return {key,
          [&ref, key](const std::string& v) -> std::optional<std::string> {
            std::vector<double> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) {
              auto d = to_double(item);
              if (!d) return key + ": expected a comma-separated list of numbers, got '" + v + "'";
              out.push_back(*d);
            }
            ref = std::move(out);
            return std::nullopt;
          },
          [&ref] {
            std::string s;
            for (std::size_t i = 0; i < ref.size(); ++i) s += (i ? "," : "") + format17(ref[i]);
            return s;
          }};
}

Binding entry(std::string key, std::string& ref) {
  return {key,
          [&ref](const std::string& v) -> std::optional<std::string> {
            ref = trim(v);
            return std::nullopt;
          },
          [&ref] { return ref; }};
}

Binding entry(std::string key, bool& ref) {
  return {key,
          [&ref, key](const std::string& v) -> std::optional<std::string> {
            const std::string t = trim(v);
            if (t == "true" || t == "1") ref = true;
            else if (t == "false" || t == "0") ref = false;
            else return key + ": expected true or false, got '" + v + "'";
            return std::nullopt;
          },
          [&ref] { return std::string(ref ? "true" : "false"); }};
}

Binding entry(std::string key, std::filesystem::path& ref) {
  return {key,
          [&ref](const std::string& v) -> std::optional<std::string> {
            ref = trim(v);
            return std::nullopt;
          },
          [&ref] { return ref.string(); }};
}

Binding entry(std::string key, SolverKind& ref) {
  return {key,
          [&ref, key](const std::string& v) -> std::optional<std::string> {
            const std::string t = trim(v);
            for (auto k : {SolverKind::fourier, SolverKind::mc, SolverKind::series,
                           SolverKind::fractional, SolverKind::schrodinger})
              if (t == solver_name(k)) {
                ref = k;
                return std::nullopt;
              }
            return key + ": must be one of fourier, mc, series, fractional, schrodinger, got '" + v + "'";
          },
          [&ref] { return std::string(solver_name(ref)); }};
}

std::vector<Binding> bindings(ExperimentConfig& c) {
  auto& m = c.model;
  auto& g = c.grid;
  auto& r = c.run;
  auto& t = c.tolerance;
  return {
      entry_int("model.dimension", m.dimension),
      entry("model.alpha", m.alpha),
      entry("model.beta", m.beta),
      entry("model.nu", m.nu),
      entry("model.a0", m.a0),
      entry("model.p_max", m.p_max),
      entry_int("grid.n_x", g.n_x),
      entry_int("grid.n_k", g.n_k),
      entry("grid.L_x", g.L_x),
      entry("grid.L_k", g.L_k),
      entry("solver.kind", c.solver),
      entry("run.t", r.t),
      entry_int("run.seed", r.seed),
      entry_int("run.n_paths", r.n_paths),
      entry("run.delta", r.delta),
      entry("run.etas", r.etas),
      entry("run.epsilons", r.epsilons),
      entry("run.gamma", r.gamma),
      entry_int("run.n_potentials", r.n_potentials),
      entry_int("run.n_mixture", r.n_mixture),
      entry_int("run.cutoff_N", r.cutoff_N),
      entry_int("run.n_max", r.n_max),
      entry_int("run.time_quad_order", r.time_quad_order),
      entry_int("run.p_quad_order", r.p_quad_order),
      entry("run.w0_x0", r.w0_x0),
      entry("run.w0_k0", r.w0_k0),
      entry("run.w0_sx", r.w0_sx),
      entry("run.w0_sk", r.w0_sk),
      entry("run.w0_amp", r.w0_amp),
      entry("run.initial_field", r.initial_field),
      entry_int("run.probes", r.probes),
      entry_int("run.field_n", r.field_n),
      entry("run.field_L", r.field_L),
      entry_int("run.field_steps", r.field_steps),
      entry("run.field_dt", r.field_dt),
      entry("run.position_width", r.position_width),
      entry("run.momentum_center", r.momentum_center),
      entry("run.momentum_width", r.momentum_width),
      entry("run.freeze_potential", r.freeze_potential),
      entry("output.dir", c.output_dir),
      entry("tolerance.mc_rmse_fraction", t.mc_rmse_fraction),
      entry("tolerance.mc_point_fraction", t.mc_point_fraction),
      entry("tolerance.stderr_multiple", t.stderr_multiple),
      entry("tolerance.norm_slack", t.norm_slack),
      entry("tolerance.damping_relative", t.damping_relative),
      entry("tolerance.fractional_spread", t.fractional_spread),
      entry("tolerance.fractional_slope", t.fractional_slope),
      entry("tolerance.unitarity_drift", t.unitarity_drift),
      entry("tolerance.free_limit", t.free_limit),
      entry("tolerance.constants_relative", t.constants_relative),
      entry("tolerance.strang_ratio_min", t.strang_ratio_min),
      entry("tolerance.strang_ratio_max", t.strang_ratio_max),
  };
}

std::string env_name(std::string key, char sep) {
  for (auto& ch : key) ch = ch == '.' ? sep : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return "LRK_" + key;
}

bool power_of_two(long n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::fourier: return "fourier";
    case SolverKind::mc: return "mc";
    case SolverKind::series: return "series";
    case SolverKind::fractional: return "fractional";
    case SolverKind::schrodinger: return "schrodinger";
  }
  return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<std::string> config_keys() {
  ExperimentConfig c;
  std::vector<std::string> keys;
  for (const auto& b : bindings(c)) keys.push_back(b.key);
  return keys;
}

std::vector<std::string> config_violations(const ExperimentConfig& c) {
  std::vector<std::string> out = c.model.violations();
  for (auto& v : c.grid.violations()) out.push_back(std::move(v));
  const auto& r = c.run;
  auto need = [&](bool ok, const std::string& key, const std::string& rule, const std::string& got) {
    if (!ok) out.push_back(key + ": " + rule + ", got " + got);
  };
  need(r.t >= 0.0 && std::isfinite(r.t), "run.t", "must be finite and nonnegative", format17(r.t));
  need(r.gamma > 0.0 && r.gamma < 1.0, "run.gamma", "must lie in the open interval (0, 1)", format17(r.gamma));
  need(r.n_paths >= 1, "run.n_paths", "must be positive", std::to_string(r.n_paths));
  need(r.delta > 0.0, "run.delta", "must be positive", format17(r.delta));
  bool etas_ok = !r.etas.empty();
  for (std::size_t i = 0; i < r.etas.size(); ++i)
    etas_ok = etas_ok && r.etas[i] > 0.0 && (i == 0 || r.etas[i] < r.etas[i - 1]);
  need(etas_ok, "run.etas", "must be a nonempty strictly decreasing list of positive numbers",
       std::to_string(r.etas.size()) + " entries");
  bool eps_ok = !r.epsilons.empty();
  for (double e : r.epsilons) eps_ok = eps_ok && e > 0.0;
  need(eps_ok, "run.epsilons", "must be a nonempty list of positive numbers",
       std::to_string(r.epsilons.size()) + " entries");
  if (eps_ok && c.solver == SolverKind::schrodinger && c.grid.violations().empty()) {
    for (double e : r.epsilons) {
      try {
        admissible_wave_points(c.grid, e);
      } catch (const Error& err) {
        out.push_back(std::string("run.epsilons: ") + err.what());
      }
    }
  }
  need(r.n_potentials >= 2, "run.n_potentials", "must be at least 2", std::to_string(r.n_potentials));
  need(r.n_mixture >= 1 && r.n_mixture <= c.grid.n_k, "run.n_mixture", "must lie in [1, grid.n_k]",
       std::to_string(r.n_mixture));
  need(r.cutoff_N >= 1, "run.cutoff_N", "must be positive", std::to_string(r.cutoff_N));
  need(r.n_max >= 0 && r.n_max <= 3, "run.n_max", "must lie in [0, 3]", std::to_string(r.n_max));
  need(r.time_quad_order >= 1, "run.time_quad_order", "must be positive", std::to_string(r.time_quad_order));
  need(r.p_quad_order >= 1, "run.p_quad_order", "must be positive", std::to_string(r.p_quad_order));
  need(r.w0_sx > 0.0, "run.w0_sx", "must be positive", format17(r.w0_sx));
  need(r.w0_sk > 0.0, "run.w0_sk", "must be positive", format17(r.w0_sk));
  need(r.probes >= 1, "run.probes", "must be positive", std::to_string(r.probes));
  need(power_of_two(r.field_n), "run.field_n", "must be a power of two >= 2", std::to_string(r.field_n));
  need(r.field_L > 0.0, "run.field_L", "must be positive", format17(r.field_L));
  need(r.field_steps >= 0, "run.field_steps", "must be nonnegative", std::to_string(r.field_steps));
  need(r.field_dt > 0.0, "run.field_dt", "must be positive", format17(r.field_dt));
  need(r.position_width > 0.0, "run.position_width", "must be positive", format17(r.position_width));
  need(r.momentum_width > 0.0, "run.momentum_width", "must be positive", format17(r.momentum_width));
  need(!c.output_dir.empty(), "output.dir", "must not be empty", "''");

  ExperimentConfig copy = c;
  for (const auto& b : bindings(copy)) {
    if (b.key.rfind("tolerance.", 0) != 0) continue;
    const double v = *to_double(b.get());
    need(v > 0.0 && std::isfinite(v), b.key, "must be finite and positive", format17(v));
  }
  need(c.tolerance.strang_ratio_min < c.tolerance.strang_ratio_max, "tolerance.strang_ratio_min",
       "must be below tolerance.strang_ratio_max", format17(c.tolerance.strang_ratio_min));
  return out;
}

void apply_settings(ExperimentConfig& cfg, const std::map<std::string, std::string>& values,
                    std::vector<std::string>& violations) {
  auto table = bindings(cfg);
  for (const auto& [key, value] : values) {
    auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return b.key == key; });
    if (it == table.end()) {
      violations.push_back(key + ": unknown key");
      continue;
    }
    if (auto err = it->set(value)) violations.push_back(*err);
  }
}

std::map<std::string, std::string> environment_overrides() {
  std::map<std::string, std::string> out;
  for (const auto& key : config_keys()) {
    for (char sep : {'.', '_'}) {
      if (const char* v = std::getenv(env_name(key, sep).c_str())) {
        out[key] = v;
        break;
      }
    }
  }
  return out;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  std::vector<std::string> violations;
  apply_settings(cfg, environment_overrides(), violations);
  for (auto& v : config_violations(cfg)) violations.push_back(std::move(v));
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open file '" + path.string() + "'"});
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({std::string("config: ") + e.what()});
  }
  std::map<std::string, std::string> values;
  std::vector<std::string> violations;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      violations.push_back(section + ": key outside of any section");
      continue;
    }
    for (const auto& [key, leaf] : body) values[section + "." + key] = leaf.get_value<std::string>();
  }
  for (const auto& [key, value] : environment_overrides()) values[key] = value;
  ExperimentConfig cfg;
  apply_settings(cfg, values, violations);
  for (auto& v : config_violations(cfg)) violations.push_back(std::move(v));
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

std::string echo_config(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  std::ostringstream os;
  std::string section;
  for (const auto& b : bindings(copy)) {
    const auto dot = b.key.find('.');
    const std::string s = b.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) os << "\n";
      os << "[" << s << "]\n";
      section = s;
    }
    os << b.key.substr(dot + 1) << " = " << b.get() << "\n";
  }
  return os.str();
}

}  // namespace lrk
