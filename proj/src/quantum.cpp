#include "decaylab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "decaylab/errors.hpp"
#include "decaylab/numerics/quadrature.hpp"
#include "decaylab/numerics/spline.hpp"
#include "decaylab/parallel.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_pair(const PotentialSpec& spec, const InitialState& state) {
  state.validate();
  if (std::abs(state.L - spec.L) > 1e-12 * spec.L)
    throw DomainError("initial state width must equal the barrier position L");
}

// |I(k)| ≤ A_I / k² for k ≥ K, with K > nπ/L.
double overlap_integral_bound(const InitialState& s, double K) {
  const double q = s.n * kPi;
  return std::sqrt(2.0 / s.L) * q * s.L * K * K / (K * K * s.L * s.L - q * q);
}

// Majorant constant for |c(k) w_k(r)| ≤ C k⁻² on k ≥ K; infinite if not valid.
double psi_envelope_bound(const PotentialSpec& spec, const InitialState& s, double K) {
  if (!(K > s.n * kPi / s.L) || !(K > std::abs(spec.alpha))) return std::numeric_limits<double>::infinity();
  const double shrink = 1.0 - std::abs(spec.alpha) / K;
  return (2.0 / kPi) * overlap_integral_bound(s, K) / (shrink * shrink);
}

double k_floor(const PotentialSpec& spec, const InitialState& s) {
  return std::max((s.n + 1) * kPi / s.L, 2.0 * std::abs(spec.alpha) + kPi / s.L);
}

// Integrates g(k) e^{-i t' k²} over [0, ∞) with the cutoff rule shared by
// psi and the survival amplitude.
Complex spectral_integral(const numerics::ComplexFunction& g, double t_prime, double omega,
                          double decay_power, const std::function<double(double)>& bound_at,
                          double floor, double tol, double tol_t0) {
  using namespace numerics;
  OscillatoryOptions o;
  o.envelope_frequency = omega;
  o.decay_power = decay_power;
  const Phase phase = Phase::polynomial(t_prime);

  if (t_prime == 0.0) {
    // Absolute majorant only: C K^{1-p}/(p-1) ≤ tol_t0/2.
    o.tol = tol_t0;
    double K = floor;
    for (int i = 0; i < 200; ++i) {
      const double C = bound_at(K);
      if (std::isfinite(C) && C * std::pow(K, 1.0 - decay_power) / (decay_power - 1.0) <= 0.4 * tol_t0) break;
      K *= 1.25;
    }
    o.envelope_bound = bound_at(K);
    return integrate_oscillatory(g, phase, 0.0, K, o).value;
  }

  o.tol = tol;
  double K = std::max(floor, 4.0 * omega / t_prime);
  for (int i = 0; i < 200; ++i) {
    o.envelope_bound = bound_at(K);
    const TailEstimate tail = oscillatory_tail(g, phase, K, o);
    if (tail.asymptotic && tail.error <= 0.25 * tol) break;
    K *= 1.25;
  }
  o.envelope_bound = bound_at(K);
  return integrate_oscillatory(g, phase, 0.0, K, o).value;
}

}  // namespace

void InitialState::validate() const {
  if (n < 1) throw DomainError("initial state: n must be a positive integer");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("initial state: L must be positive");
}

double InitialState::value(double r) const {
  if (r < 0.0 || r > L) return 0.0;
  return std::sqrt(2.0 / L) * std::sin(n * kPi * r / L);
}

double overlap_integral(const InitialState& s, double k) {
  const double q = s.n * kPi;
  const double x = k * s.L;
  const double d = x - q;
  const double amp = std::sqrt(2.0 / s.L) * q * s.L;
  if (std::abs(d) < 1e-3) {
    // sin(x)/(x² - q²) = (-1)ⁿ (sin d / d)/(2q + d); the signs cancel.
    const double d2 = d * d;
    const double sinc = 1.0 - d2 / 6.0 * (1.0 - d2 / 20.0 * (1.0 - d2 / 42.0));
    return amp * sinc / (2.0 * q + d);
  }
  const double sign = (s.n % 2 == 0) ? 1.0 : -1.0;
  return amp * sign * std::sin(x) / (x * x - q * q);
}

Complex overlap(const PotentialSpec& spec, const InitialState& state, double k) {
  check_pair(spec, state);
  if (k < 0.0) throw DomainError("overlap: k must be non-negative");
  const double norm = std::sqrt(2.0 / kPi);
  if (k == 0.0) {
    if (!spec.critical()) return 0.0;
    const double sign = (state.n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
    return norm * sign * std::sqrt(2.0 / state.L) / (state.n * kPi * std::abs(spec.alpha));
  }
  const double af = std::abs(jost(spec, k));
  if (af == 0.0) throw NodeError("overlap: f(k) = 0");
  return norm * overlap_integral(state, k) / af;
}

double overlap_density(const PotentialSpec& spec, const InitialState& state, double k) {
  return std::norm(overlap(spec, state, k));
}

double velocity_density_at(const PotentialSpec& spec, const InitialState& state,
                           const PhysicalUnits& units, double v) {
  if (v < 0.0) throw DomainError("velocity density: v must be non-negative");
  return overlap_density(spec, state, units.k_from_velocity(v)) * units.m / units.hbar;
}

VelocityDensity velocity_density(const PotentialSpec& spec, const InitialState& state,
                                 const PhysicalUnits& units, std::span<const double> v_grid) {
  units.validate();
  check_pair(spec, state);
  if (v_grid.size() < 3) throw DomainError("velocity_density: need at least 3 grid points");
  VelocityDensity out;
  out.bound_state = spec.has_bound_state();
  out.v.assign(v_grid.begin(), v_grid.end());
  out.rho.resize(v_grid.size());
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (v_grid[i] < 0.0) throw DomainError("velocity_density: v must be non-negative");
    if (i > 0 && !(v_grid[i] > v_grid[i - 1])) throw DomainError("velocity_density: grid must ascend");
    out.rho[i] = velocity_density_at(spec, state, units, v_grid[i]);
  }
  // Quadratic through the three smallest nodes (Newton divided differences).
  const double x0 = out.v[0], x1 = out.v[1], x2 = out.v[2];
  const double y0 = out.rho[0], y1 = out.rho[1], y2 = out.rho[2];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double c2 = (d12 - d01) / (x2 - x0);
  const double c1 = d01 - c2 * (x0 + x1);
  out.beta_smallv = c2;
  out.rho_zero = y0 - c1 * x0 - c2 * x0 * x0;
  const numerics::CubicSpline spline(out.v, out.rho);
  for (std::size_t i = 0; i + 1 < out.v.size(); ++i) out.mass += spline.interval_integral(i);
  return out;
}

double completeness_cutoff(const PotentialSpec& spec, const InitialState& state, double eps) {
  check_pair(spec, state);
  if (!(eps > 0.0)) throw DomainError("completeness_cutoff: eps must be positive");
  const double L = state.L;
  const double q = state.n * kPi;
  auto bound = [&](double K) {
    if (!(K * L > q) || !(K > std::abs(spec.alpha))) return std::numeric_limits<double>::infinity();
    const double far = 4.0 * state.n * state.n * kPi / (3.0 * L * L * L * K * K * K);
    const double near = K * K * L * L / (K * K * L * L - q * q);
    const double shrink = 1.0 - std::abs(spec.alpha) / K;
    return far * near * near / (shrink * shrink);
  };
  double K = std::cbrt(4.0 * state.n * state.n * kPi / (3.0 * L * L * L * eps));
  while (!(bound(K) < eps)) K *= 1.01;
  return K;
}

std::vector<double> velocity_nodes(const PotentialSpec& spec, const InitialState& state,
                                   const PhysicalUnits& units, double v_max) {
  check_pair(spec, state);
  if (!(v_max > 0.0)) throw DomainError("velocity_nodes: v_max must be positive");
  const double vscale = units.hbar / (units.m * state.L);
  const double h_max = vscale * kPi / 64.0;
  const double h_min = 1e-6 * vscale;
  std::vector<double> v{0.0};
  while (v.back() < v_max) {
    const double h = std::min(h_max, h_min + 0.05 * v.back());
    double next = v.back() + h;
    if (next > v_max || v_max - next < 0.25 * h) next = v_max;
    v.push_back(next);
  }
  return v;
}

VelocityDensity velocity_table(const PotentialSpec& spec, const InitialState& state,
                               const PhysicalUnits& units) {
  units.validate();
  check_pair(spec, state);
  const double v_max = units.velocity(completeness_cutoff(spec, state));
  std::vector<double> v = velocity_nodes(spec, state, units, v_max);
  auto rho = [&](double x) { return velocity_density_at(spec, state, units, x); };

  // Refine until the clamped spline reproduces ρ at interval midpoints.
  std::vector<double> y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = rho(v[i]);
  for (int pass = 0; pass < 8; ++pass) {
    const numerics::CubicSpline s(v, y, 0.0, std::nullopt);
    const double peak = *std::max_element(y.begin(), y.end());
    std::vector<double> nv{v[0]}, ny{y[0]};
    bool refined = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double mid = 0.5 * (v[i] + v[i + 1]);
      const double exact = rho(mid);
      const double tol = 1e-7 * std::max(exact, 1e-4 * peak);
      if (std::abs(s(mid) - exact) > tol && v[i + 1] - v[i] > 1e-9 * v_max) {
        nv.push_back(mid);
        ny.push_back(exact);
        refined = true;
      }
      nv.push_back(v[i + 1]);
      ny.push_back(y[i + 1]);
    }
    v.swap(nv);
    y.swap(ny);
    if (!refined) break;
  }
  VelocityDensity out = velocity_density(spec, state, units, v);
  return out;
}

SpectralAmplitude spectral_amplitude(const PotentialSpec& spec, const InitialState& state,
                                     std::span<const double> k_grid) {
  SpectralAmplitude a;
  a.k_grid.assign(k_grid.begin(), k_grid.end());
  a.c.reserve(k_grid.size());
  for (double k : k_grid) a.c.push_back(overlap(spec, state, k));
  a.kmax = k_grid.empty() ? 0.0 : k_grid.back();
  return a;
}

double completeness(const PotentialSpec& spec, const InitialState& state, double kmax) {
  check_pair(spec, state);
  if (!(kmax > 0.0)) throw DomainError("completeness: kmax must be positive");
  numerics::AdaptiveOptions o;
  o.tol = {1e-13, 1e-12};
  o.max_intervals = 200000;
  const double period = kPi / state.L;
  for (double k = period; k < kmax; k += period) o.breakpoints.push_back(k);
  return numerics::integrate_adaptive([&](double k) { return overlap_density(spec, state, k); }, 0.0,
                                      kmax, o)
      .value;
}

Complex psi(const PotentialSpec& spec, const InitialState& state, const PhysicalUnits& units,
            double r, double t, const PsiOptions& opts) {
  units.validate();
  check_pair(spec, state);
  if (r < 0.0) throw DomainError("psi: r must be non-negative");
  if (!(t >= 0.0)) throw DomainError("psi: t must be non-negative");
  if (r == 0.0) return 0.0;

  // c(k) w_k(r) with a single Jost evaluation; w_0 = 0 in every case.
  const bool inside = r <= spec.L;
  auto g = [&](double k) -> Complex {
    if (k == 0.0) return 0.0;
    const Complex f = jost(spec, k);
    const double f2 = std::norm(f);
    if (f2 == 0.0) throw NodeError("psi: f(k) = 0");
    const double w = inside ? std::sin(k * r)
                            : (Complex(std::cos(k * r), std::sin(k * r)) * std::conj(f)).imag();
    return (2.0 / kPi) * overlap_integral(state, k) * w / f2;
  };
  auto bound = [&](double K) { return psi_envelope_bound(spec, state, K); };
  return spectral_integral(g, units.phase_rate() * t, r + 3.0 * state.L, 2.0, bound,
                           k_floor(spec, state), opts.tol, opts.tol_t0);
}

double density_quantum(const PotentialSpec& spec, const InitialState& state,
                       const PhysicalUnits& units, double r, double t, const PsiOptions& opts) {
  return std::norm(psi(spec, state, units, r, t, opts));
}

DensityTrace density_trace_quantum(const PotentialSpec& spec, const InitialState& state,
                                   const PhysicalUnits& units, double r,
                                   std::span<const double> times, const PsiOptions& opts) {
  DensityTrace tr;
  tr.r = r;
  tr.provenance = Provenance::quantum_spectral;
  tr.times.assign(times.begin(), times.end());
  tr.values.assign(times.size(), 0.0);
  parallel_for(times.size(), opts.threads, [&](std::size_t i) {
    tr.values[i] = density_quantum(spec, state, units, r, times[i], opts);
  });
  tr.validate();
  return tr;
}

double survival_probability(const PotentialSpec& spec, const InitialState& state,
                            const PhysicalUnits& units, double t, const PsiOptions& opts) {
  units.validate();
  check_pair(spec, state);
  if (!(t >= 0.0)) throw DomainError("survival_probability: t must be non-negative");
  auto g = [&](double k) -> Complex { return overlap_density(spec, state, k); };
  auto bound = [&](double K) {
    const double C = psi_envelope_bound(spec, state, K);
    return C * overlap_integral_bound(state, K);  // (2/π) A_I² / (1 - |α|/K)²
  };
  const Complex a = spectral_integral(g, units.phase_rate() * t, 4.0 * state.L, 4.0, bound,
                                      k_floor(spec, state), opts.tol, opts.tol_t0 * 1e-3);
  return std::norm(a);
}

}  // namespace decaylab
