#include "lrk/levy_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrk/error.hpp"
#include "lrk/parallel.hpp"
#include "lrk/quadrature.hpp"

namespace lrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Blocks combined per parallel round; the combination order is fixed.
constexpr std::size_t kBlocksPerRound = 8;

struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments combine(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments out;
  out.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * static_cast<double>(b.n) / out.n;
  out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.n) * b.n / out.n;
  return out;
}

struct FieldMoments {
  long n = 0;
  std::vector<double> mean;
  std::vector<double> m2;
  std::uint64_t wrapped = 0;
};

FieldMoments combine(FieldMoments a, FieldMoments b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  const long n = a.n + b.n;
  const double wb = static_cast<double>(b.n) / n;
  const double wab = static_cast<double>(a.n) * b.n / n;
  for (std::size_t i = 0; i < a.mean.size(); ++i) {
    const double delta = b.mean[i] - a.mean[i];
    a.mean[i] += delta * wb;
    a.m2[i] += b.m2[i] + delta * delta * wab;
  }
  a.n = n;
  a.wrapped += b.wrapped;
  return a;
}

double open_unit(CounterRng& rng) {
  return (static_cast<double>(rng.next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

void check_mc_args(double t, long n_paths, double delta) {
  if (t < 0.0) throw PreconditionError("levy_mc: t must be nonnegative");
  if (n_paths < 2) throw PreconditionError("levy_mc: n_paths must be at least 2");
  if (!(delta > 0.0)) throw PreconditionError("levy_mc: delta must be positive");
}

// Runs blocks of paths in rounds; each block is reduced to a partial result
// by `block_fn`, partials are merged by a fixed pairwise tree per round and
// rounds are merged in order.
template <class Partial, class BlockFn>
Partial run_blocks(long n_paths, long block_size, BlockFn&& block_fn) {
  const std::size_t blocks = static_cast<std::size_t>((n_paths + block_size - 1) / block_size);
  Partial total{};
  for (std::size_t first = 0; first < blocks; first += kBlocksPerRound) {
    const std::size_t count = std::min(kBlocksPerRound, blocks - first);
    std::vector<Partial> parts(count);
    parallel_for(count, [&](std::size_t b) {
      const long begin = static_cast<long>(first + b) * block_size;
      const long end = std::min(n_paths, begin + block_size);
      parts[b] = block_fn(begin, end);
    });
    Partial round = tree_reduce(std::move(parts), [](Partial a, Partial b) {
      return combine(std::move(a), std::move(b));
    });
    total = combine(std::move(total), std::move(round));
  }
  return total;
}

}  // namespace

JumpSampler::JumpSampler(const JumpMeasure& jump, double delta) : jump_(jump), delta_(delta) {
  if (!(delta > 0.0)) throw DomainError("JumpSampler: delta must be positive");
  const double r_max = jump.support();
  if (delta >= r_max || jump.is_zero()) return;
  rate_ = jump.total_rate(delta);

  const int d = jump.dimension();
  knots_.resize(kKnots);
  density_.resize(kKnots);
  cdf_.assign(kKnots, 0.0);
  const double log_ratio = std::log(r_max / delta);
  for (int i = 0; i < kKnots; ++i) {
    knots_[i] = i + 1 == kKnots ? r_max : delta * std::exp(log_ratio * i / (kKnots - 1));
    density_[i] = std::pow(knots_[i], d - 1) * jump.sigma_radial(knots_[i]);
  }
  const auto& rule = quad::gauss_legendre(8);
  auto radial_density = [&](double r) { return std::pow(r, d - 1) * jump.sigma_radial(r); };
  for (int i = 1; i < kKnots; ++i)
    cdf_[i] = cdf_[i - 1] + quad::gauss(radial_density, knots_[i - 1], knots_[i], rule);
  const double total = cdf_.back();
  if (!(total > 0.0)) throw InternalError("JumpSampler: empty radial table");
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;

  const auto& model = jump.model();
  if (d == 2 && model.angular) {
    constexpr int n = 4096;
    double mx = 0.0, mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = model.angular(kTwoPi * i / n);
      mx = std::max(mx, a);
      mean += a / n;
    }
    angular_max_ = mx * 1.01;
    acceptance_ = mx > 0.0 ? mean / angular_max_ : 0.0;
    if (acceptance_ < 0.01) {
      std::ostringstream os;
      os << "JumpSampler: direction rejection acceptance " << acceptance_
         << " is below 1%; the direction factor is too anisotropic";
      throw PreconditionError(os.str());
    }
  }
}

double JumpSampler::sample_radius(double u) const {
  if (knots_.empty()) throw PreconditionError("JumpSampler: no jumps above delta");
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  int i = static_cast<int>(it - cdf_.begin()) - 1;
  i = std::clamp(i, 0, kKnots - 2);
  const double c0 = cdf_[i], c1 = cdf_[i + 1];
  const double f = c1 > c0 ? std::clamp((u - c0) / (c1 - c0), 0.0, 1.0) : 0.5;
  const double r0 = knots_[i], r1 = knots_[i + 1];
  const double d0 = density_[i], d1 = density_[i + 1];
  double r;
  if (d0 > 0.0 && d1 > 0.0) {
    const double s = std::log(d1 / d0) / std::log(r1 / r0);
    const double e = s + 1.0;
    if (std::abs(e) < 1e-9)
      r = r0 * std::pow(r1 / r0, f);
    else {
      const double a = std::pow(r0, e), b = std::pow(r1, e);
      r = std::pow(a + f * (b - a), 1.0 / e);
    }
  } else {
    r = r0 + f * (r1 - r0);
  }
  return std::clamp(r, std::nextafter(delta_, r1), std::nextafter(knots_.back(), 0.0));
}

double JumpSampler::radial_cdf(double r) const {
  if (knots_.empty() || r <= delta_) return 0.0;
  if (r >= knots_.back()) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
  const int i = std::clamp(static_cast<int>(it - knots_.begin()) - 1, 0, kKnots - 2);
  const double r0 = knots_[i], r1 = knots_[i + 1];
  const double d0 = density_[i], d1 = density_[i + 1];
  double f;
  if (d0 > 0.0 && d1 > 0.0) {
    const double s = std::log(d1 / d0) / std::log(r1 / r0);
    const double e = s + 1.0;
    if (std::abs(e) < 1e-9)
      f = std::log(r / r0) / std::log(r1 / r0);
    else
      f = (std::pow(r, e) - std::pow(r0, e)) / (std::pow(r1, e) - std::pow(r0, e));
  } else {
    f = (r - r0) / (r1 - r0);
  }
  return cdf_[i] + f * (cdf_[i + 1] - cdf_[i]);
}

void JumpSampler::sample(CounterRng& rng, double* out) const {
  const double r = sample_radius(open_unit(rng));
  const int d = dimension();
  if (d == 1) {
    out[0] = (rng.next_u64() >> 63) ? r : -r;
    return;
  }
  const auto& model = jump_.model();
  for (int attempt = 0;; ++attempt) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      out[i] = rng.normal();
      s += out[i] * out[i];
    }
    s = std::sqrt(s);
    if (s == 0.0) continue;
    for (int i = 0; i < d; ++i) out[i] /= s;
    if (!model.angular || rng.uniform() * angular_max_ <= model.angular(std::atan2(out[1], out[0])))
      break;
    if (attempt > 100000) throw ConvergenceError("JumpSampler: direction rejection stalled");
  }
  for (int i = 0; i < d; ++i) out[i] *= r;
}

LevyPath sample_path(const JumpSampler& sampler, double t, CounterRng& rng) {
  if (t < 0.0) throw PreconditionError("sample_path: t must be nonnegative");
  LevyPath path;
  path.dimension = sampler.dimension();
  path.horizon = t;
  const double rate = sampler.rate();
  if (t == 0.0 || rate == 0.0) return path;
  std::vector<double> jump(static_cast<std::size_t>(path.dimension));
  double clock = 0.0;
  for (;;) {
    clock += rng.exponential() / rate;
    if (clock > t) break;
    path.times.push_back(clock);
    sampler.sample(rng, jump.data());
    path.jumps.insert(path.jumps.end(), jump.begin(), jump.end());
  }
  return path;
}

std::vector<double> occupation_integral(const LevyPath& path) {
  const int d = path.dimension;
  std::vector<double> level(d, 0.0), out(d, 0.0);
  for (std::size_t n = 0; n < path.count(); ++n) {
    for (int i = 0; i < d; ++i) level[i] += path.jumps[n * d + i];
    const double until = n + 1 < path.count() ? path.times[n + 1] : path.horizon;
    const double span = until - path.times[n];
    for (int i = 0; i < d; ++i) out[i] += level[i] * span;
  }
  return out;
}

std::vector<double> path_endpoint(const LevyPath& path) {
  const int d = path.dimension;
  std::vector<double> out(d, 0.0);
  for (std::size_t n = 0; n < path.count(); ++n)
    for (int i = 0; i < d; ++i) out[i] += path.jumps[n * d + i];
  return out;
}

McEstimate estimate_point(const std::function<double(double, double)>& w0, double x, double k,
                          double t, const JumpMeasure& jump, double delta, long n_paths,
                          std::uint64_t seed, const McOptions& opts) {
  check_mc_args(t, n_paths, delta);
  if (jump.dimension() != 1) throw PreconditionError("estimate_point: only dimension 1 is supported");
  const JumpSampler sampler(jump, delta);
  auto block = [&](long begin, long end) {
    Moments m;
    double c = 0.0, s1 = 0.0, s2 = 0.0;
    for (long p = begin; p < end; ++p) {
      CounterRng rng(seed, static_cast<std::uint64_t>(p), StreamDomain::levy_paths);
      const LevyPath path = sample_path(sampler, t, rng);
      const double a = occupation_integral(path)[0];
      const double l = path_endpoint(path)[0];
      const double v = w0(x - t * k - a, k + l);
      if (p == begin) c = v;
      const double dv = v - c;
      s1 += dv;
      s2 += dv * dv;
    }
    m.n = end - begin;
    m.mean = c + s1 / m.n;
    m.m2 = std::max(0.0, s2 - s1 * s1 / m.n);
    return m;
  };
  const Moments total = run_blocks<Moments>(n_paths, opts.block_size, block);
  McEstimate est;
  est.mean = total.mean;
  est.n_paths = n_paths;
  est.delta = delta;
  est.std_error = std::sqrt(total.m2 / (n_paths - 1.0) / n_paths);
  return est;
}

McEstimate estimate_point(const WignerField& w0, double x, double k, double t,
                          const JumpMeasure& jump, double delta, long n_paths,
                          std::uint64_t seed, const McOptions& opts) {
  const BilinearSampler interp(w0);
  return estimate_point([&](double xx, double kk) { return interp(xx, kk); }, x, k, t, jump,
                        delta, n_paths, seed, opts);
}

McField estimate_field(const WignerField& w0, double t, const JumpMeasure& jump, double delta,
                       long n_paths, std::uint64_t seed, const McOptions& opts) {
  check_mc_args(t, n_paths, delta);
  if (jump.dimension() != 1) throw PreconditionError("estimate_field: only dimension 1 is supported");
  const auto& g = w0.grid;
  g.validate();
  const int nx = g.n_x, nk = g.n_k;
  const std::size_t size = g.size();
  const JumpSampler sampler(jump, delta);

  // k-major copy with every row stored twice so that x-shifts never wrap.
  std::vector<double> rows(static_cast<std::size_t>(nk) * 2 * nx);
  for (int j = 0; j < nk; ++j)
    for (int i = 0; i < 2 * nx; ++i)
      rows[static_cast<std::size_t>(j) * 2 * nx + i] = w0.at(i % nx, j);

  auto wrap = [](long i, int n) {
    const long r = i % n;
    return static_cast<int>(r < 0 ? r + n : r);
  };

  auto evaluate = [&](double a, double l, double* out) -> std::uint64_t {
    std::uint64_t wrapped = 0;
    const double fk = l / g.dk();
    const double kshift = std::floor(fk);
    const double tk = fk - kshift;
    for (int j = 0; j < nk; ++j) {
      const long kj = j + static_cast<long>(kshift);
      if (kj < 0 || kj >= nk || (kj == nk - 1 && tk > 0.0)) wrapped += nx;
      const int j0 = wrap(kj, nk);
      const int j1 = j0 + 1 == nk ? 0 : j0 + 1;
      const double s = (-t * g.k(j) - a) / g.dx();
      const double xshift = std::floor(s);
      const double tx = s - xshift;
      const double reach = s >= 0.0 ? std::floor(s) : std::ceil(-s);
      wrapped += static_cast<std::uint64_t>(std::min<double>(nx, reach));
      const int base = wrap(static_cast<long>(xshift), nx);
      const double* r0 = &rows[static_cast<std::size_t>(j0) * 2 * nx + base];
      const double* r1 = &rows[static_cast<std::size_t>(j1) * 2 * nx + base];
      const double w00 = (1.0 - tx) * (1.0 - tk), w01 = (1.0 - tx) * tk;
      const double w10 = tx * (1.0 - tk), w11 = tx * tk;
      double* dst = out + static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i)
        dst[i] = w00 * r0[i] + w01 * r1[i] + w10 * r0[i + 1] + w11 * r1[i + 1];
    }
    return wrapped;
  };

  auto block = [&](long begin, long end) {
    FieldMoments m;
    std::vector<double> first(size), s1(size, 0.0), s2(size, 0.0), vals(size);
    for (long p = begin; p < end; ++p) {
      CounterRng rng(seed, static_cast<std::uint64_t>(p), StreamDomain::levy_paths);
      const LevyPath path = sample_path(sampler, t, rng);
      const double a = occupation_integral(path)[0];
      const double l = path_endpoint(path)[0];
      if (p == begin) {
        m.wrapped += evaluate(a, l, first.data());
        continue;
      }
      m.wrapped += evaluate(a, l, vals.data());
      for (std::size_t n = 0; n < size; ++n) {
        const double dv = vals[n] - first[n];
        s1[n] += dv;
        s2[n] += dv * dv;
      }
    }
    m.n = end - begin;
    m.mean.resize(size);
    m.m2.resize(size);
    for (std::size_t n = 0; n < size; ++n) {
      m.mean[n] = first[n] + s1[n] / m.n;
      m.m2[n] = std::max(0.0, s2[n] - s1[n] * s1[n] / m.n);
    }
    return m;
  };

  const FieldMoments total = run_blocks<FieldMoments>(n_paths, opts.block_size, block);
  McField out;
  out.mean = WignerField::zeros(g, w0.time_stamp + t);
  out.std_error.assign(size, 0.0);
  out.n_paths = n_paths;
  out.delta = delta;
  out.wrapped_evaluations = total.wrapped;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nk; ++j) {
      const std::size_t src = static_cast<std::size_t>(j) * nx + i;
      out.mean.at(i, j) = total.mean[src];
      out.std_error[static_cast<std::size_t>(i) * nk + j] =
          std::sqrt(total.m2[src] / (n_paths - 1.0) / n_paths);
    }
  }
  return out;
}

}  // namespace lrk
