#include "decaylab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "decaylab/errors.hpp"
#include "decaylab/numerics/derivative.hpp"
#include "decaylab/numerics/quadrature.hpp"
#include "decaylab/numerics/sampling.hpp"
#include "decaylab/parallel.hpp"

namespace decaylab {

namespace {

double shifted(const SourceModel& s, double r) {
  const double rc = r - s.r_source;
  if (!(rc > 0.0)) throw DomainError("classical density: observation point is not ahead of the source");
  return rc;
}

numerics::AdaptiveOptions quad_options(const SourceModel& s, const ClassicalOptions& o) {
  numerics::AdaptiveOptions q;
  q.tol = {o.abs_tol, o.rel_tol};
  q.max_intervals = 4 * s.rho.size() + 20000;
  return q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

}  // namespace

SourceModel::SourceModel(double tau_, double r_source_, numerics::CubicSpline rho_)
    : tau(tau_), r_source(r_source_), rho(std::move(rho_)) {
  validate();
}

SourceModel SourceModel::from_table(double tau, double r_source, const VelocityDensity& table) {
  return SourceModel(tau, r_source, numerics::CubicSpline(table.v, table.rho, 0.0, std::nullopt));
}

void SourceModel::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("source: tau must be positive");
  if (!std::isfinite(r_source)) throw DomainError("source: r_source must be finite");
  if (rho.empty()) throw DomainError("source: empty velocity table");
  if (rho.front() < 0.0) throw DomainError("source: velocity table must start at v >= 0");
}

void McConfig::validate() const {
  if (n_particles < 1) throw DomainError("mc: n_particles must be >= 1");
  if (!(bin_width_r > 0.0)) throw DomainError("mc: bin_width_r must be positive");
  if (bin_width_t < 0.0) throw DomainError("mc: bin_width_t must be non-negative");
  if (partitions < 1) throw DomainError("mc: partitions must be >= 1");
}

double emission_density(double tau, double t0) {
  if (!(tau > 0.0)) throw DomainError("emission_density: tau must be positive");
  if (t0 < 0.0) throw DomainError("emission_density: t0 must be non-negative");
  return std::exp(-t0 / tau) / tau;
}

double monoenergetic_density(double tau, double v, double r, double t) {
  if (!(tau > 0.0) || !(v > 0.0) || r < 0.0) throw DomainError("monoenergetic_density: bad arguments");
  if (!(t > r / v)) return 0.0;
  return std::exp(-(t - r / v) / tau) / (tau * v);
}

double classical_density(const SourceModel& s, double r, double t, const ClassicalOptions& o) {
  const double rc = shifted(s, r);
  if (!(t > 0.0)) return 0.0;
  const double upper = t - rc / s.v_max();
  if (!(upper > 0.0)) return 0.0;
  auto integrand = [&](double t0) {
    const double dt = t - t0;
    return s.rho(rc / dt) * std::exp(-t0 / s.tau) / (dt * s.tau);
  };
  auto q = quad_options(s, o);
  for (double v : s.rho.x()) {
    if (v > rc / t) q.breakpoints.push_back(t - rc / v);
  }
  return numerics::integrate_adaptive(integrand, 0.0, upper, q).value;
}

double classical_density_velocity(const SourceModel& s, double r, double t, const ClassicalOptions& o) {
  const double rc = shifted(s, r);
  if (!(t > 0.0)) return 0.0;
  const double lower = std::max(rc / t, s.rho.front());
  if (!(lower < s.v_max())) return 0.0;
  auto integrand = [&](double v) {
    return s.rho(v) * std::exp(-(t - rc / v) / s.tau) / (s.tau * v);
  };
  auto q = quad_options(s, o);
  q.breakpoints.assign(s.rho.x().begin(), s.rho.x().end());
  return numerics::integrate_adaptive(integrand, lower, s.v_max(), q).value;
}

double asymptotic_series(const SourceModel& s, double r, double t, int order) {
  if (order < 0 || order > 4) throw DomainError("asymptotic_series: order must be in [0, 4]");
  if (!(t > 5.0 * s.tau)) throw DomainError("asymptotic_series: requires t > 5 tau");
  const double rc = shifted(s, r);
  auto g = [&](double t0) { return s.rho(rc / (t - t0)) / (t - t0); };
  double sum = g(0.0);
  double taun = 1.0;
  for (int n = 1; n <= order; ++n) {
    taun *= s.tau;
    sum += taun * numerics::numeric_derivative(g, 0.0, n, 0.05 * t);
  }
  return sum;
}

DensityTrace classical_trace(const SourceModel& s, double r, std::span<const double> times,
                             unsigned threads, const ClassicalOptions& o) {
  DensityTrace tr;
  tr.r = r;
  tr.provenance = Provenance::classical_exact;
  tr.times.assign(times.begin(), times.end());
  tr.values.assign(times.size(), 0.0);
  parallel_for(times.size(), threads, [&](std::size_t i) {
    tr.values[i] = std::max(0.0, classical_density(s, r, times[i], o));
  });
  tr.validate();
  return tr;
}

DensityTrace monte_carlo_trace(const SourceModel& s, const McConfig& mc, double r,
                               std::span<const double> times) {
  s.validate();
  mc.validate();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("monte_carlo_trace: times must be increasing");

  const numerics::InverseCdfSampler sampler(s.rho);
  const std::size_t T = times.size();
  const std::size_t P = mc.partitions;
  const double lo = r - 0.5 * mc.bin_width_r;
  const double hi = r + 0.5 * mc.bin_width_r;
  const double wt = mc.bin_width_t;

  // Per-partition weight sums (Σw, Σw²) per time; merged in partition order.
  std::vector<std::vector<double>> s1(P, std::vector<double>(T, 0.0)), s2 = s1;

  parallel_for(P, mc.threads, [&](std::size_t p) {
    std::mt19937_64 rng(splitmix64(mc.seed ^ splitmix64(p + 1)));
    const std::size_t count = mc.n_particles / P + (p < mc.n_particles % P ? 1 : 0);
    auto& w1 = s1[p];
    auto& w2 = s2[p];
    for (std::size_t j = 0; j < count; ++j) {
      const double t0 = -s.tau * std::log1p(-uniform01(rng));
      const double v = sampler(uniform01(rng));
      if (!(v > 0.0)) continue;
      // Times during which the particle sits inside [lo, hi).
      const double enter = t0 + std::max(0.0, lo - s.r_source) / v;
      const double leave = hi > s.r_source ? t0 + (hi - s.r_source) / v : enter;
      if (!(leave > enter)) continue;
      if (wt == 0.0) {
        auto first = std::lower_bound(times.begin(), times.end(), enter);
        auto last = std::lower_bound(first, times.end(), leave);
        for (auto it = first; it != last; ++it) {
          const std::size_t i = std::size_t(it - times.begin());
          w1[i] += 1.0;
          w2[i] += 1.0;
        }
      } else {
        auto first = std::upper_bound(times.begin(), times.end(), enter - 0.5 * wt);
        auto last = std::lower_bound(first, times.end(), leave + 0.5 * wt);
        for (auto it = first; it != last; ++it) {
          const double a = std::max(enter, *it - 0.5 * wt);
          const double b = std::min(leave, *it + 0.5 * wt);
          if (!(b > a)) continue;
          const double w = (b - a) / wt;
          const std::size_t i = std::size_t(it - times.begin());
          w1[i] += w;
          w2[i] += w * w;
        }
      }
    }
  });

  DensityTrace tr;
  tr.r = r;
  tr.provenance = Provenance::classical_mc;
  tr.times.assign(times.begin(), times.end());
  tr.values.assign(T, 0.0);
  tr.std_errors.assign(T, 0.0);
  tr.empty.assign(T, false);
  const double N = double(mc.n_particles);
  for (std::size_t i = 0; i < T; ++i) {
    double a = 0.0, b = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      a += s1[p][i];
      b += s2[p][i];
    }
    const double mean = a / N;
    const double var = std::max(0.0, b / N - mean * mean);
    tr.values[i] = mean / mc.bin_width_r;
    tr.std_errors[i] = std::sqrt(var / N) / mc.bin_width_r;
    tr.empty[i] = a == 0.0;
  }
  tr.validate();
  return tr;
}

}  // namespace decaylab
