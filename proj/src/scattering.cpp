#include "decaylab/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "decaylab/errors.hpp"
#include "decaylab/numerics/roots.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCriticalTol = 1e-12;

// (e^x - 1 - x)/x, accurate near 0.
Complex expm1_minus_x_over_x(Complex x) {
  if (std::abs(x) < 0.5) {
    Complex term = x / 2.0;
    Complex sum = term;
    for (int j = 3; j < 30; ++j) {
      term *= x / double(j);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(x) - 1.0 - x) / x;
}

double principal_delta(const PotentialSpec& spec, double k) {
  const Complex f = jost(spec, k);
  if (f == Complex{}) throw NodeError("phase shift undefined: f(k) = 0");
  return -std::arg(f);
}

double nearest_branch(double principal, double reference) {
  const double two_pi = 2.0 * kPi;
  return principal + two_pi * std::round((reference - principal) / two_pi);
}

double delta_at_origin(const PotentialSpec& spec) {
  if (spec.critical()) return 0.5 * kPi;
  return spec.coupling() < 0.0 ? kPi : 0.0;
}

// Continue δ from (k0, d0) to k1 with steps small enough that the principal
// value never jumps by more than 0.3 rad between neighbours.
double unwrap(const PotentialSpec& spec, double k0, double d0, double k1) {
  const double h_max = 0.05 * kPi / spec.L;
  double k = k0, d = d0;
  double h = std::min(h_max, std::max(k1 - k0, 0.0));
  while (k < k1) {
    const double kn = std::min(k1, k + h);
    const double dn = nearest_branch(principal_delta(spec, kn), d);
    if (std::abs(dn - d) > 0.3 && h > 1e-12 * (1.0 + k)) {
      h *= 0.5;
      continue;
    }
    k = kn;
    d = dn;
    h = std::min(h_max, 1.5 * h);
  }
  return d;
}

}  // namespace

void PhysicalUnits::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("units: hbar must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("units: m must be positive");
}

double PhysicalUnits::k_from_energy(double E) const {
  if (E < 0.0) throw DomainError("k_from_energy: negative energy");
  return std::sqrt(2.0 * m * E) / hbar;
}

PotentialSpec::PotentialSpec(double alpha_, double L_) : alpha(alpha_), L(L_) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("potential: L must be positive");
  if (!std::isfinite(alpha)) throw DomainError("potential: alpha must be finite");
}

bool PotentialSpec::critical() const { return std::abs(coupling()) < kCriticalTol; }

Complex jost(const PotentialSpec& spec, Complex k) {
  const Complex x = Complex(0.0, 2.0 * spec.L) * k;
  // f = 1 + αL (e^x - 1)/x = (1 + αL) + αL (e^x - 1 - x)/x
  if (x == Complex{}) return spec.coupling();
  return spec.coupling() + spec.alpha * spec.L * expm1_minus_x_over_x(x);
}

double phase_shift(const PotentialSpec& spec, double k) {
  if (!(k > 0.0)) throw DomainError("phase_shift: k must be positive");
  const double k_start = std::min(k, 1e-6 / spec.L);
  const double d0 = nearest_branch(principal_delta(spec, k_start), delta_at_origin(spec));
  return unwrap(spec, k_start, d0, k);
}

std::vector<double> phase_shift(const PotentialSpec& spec, std::span<const double> k_grid) {
  std::vector<double> out;
  out.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (i == 0) {
      out.push_back(phase_shift(spec, k_grid[0]));
      continue;
    }
    if (!(k_grid[i] > k_grid[i - 1])) throw DomainError("phase_shift: grid must be ascending");
    out.push_back(unwrap(spec, k_grid[i - 1], out.back(), k_grid[i]));
  }
  return out;
}

Complex s_matrix(const PotentialSpec& spec, double k) {
  if (!(k > 0.0)) throw DomainError("s_matrix: k must be positive");
  const Complex f = jost(spec, k);
  if (f == Complex{}) throw NodeError("s_matrix undefined: f(k) = 0");
  return std::conj(f) / f;
}

JostData jost_data(const PotentialSpec& spec, double k) {
  JostData d;
  d.k = k;
  d.f = jost(spec, k);
  d.delta = phase_shift(spec, k);
  d.S = s_matrix(spec, k);
  return d;
}

double k_cot_delta(const PotentialSpec& spec, double k) {
  const Complex f = jost(spec, k);
  if (f.imag() == 0.0) throw NodeError("k cot delta: phase shift vanishes");
  return -k * f.real() / f.imag();
}

ScatteringLength scattering_length(const PotentialSpec& spec) {
  if (spec.critical()) return {std::numeric_limits<double>::infinity(), true};
  return {spec.alpha * spec.L * spec.L / spec.coupling(), false};
}

std::vector<double> default_ere_grid(const PotentialSpec& spec, std::size_t points) {
  if (points < 3) throw DomainError("default_ere_grid: need at least 3 points");
  std::vector<double> k(points);
  for (std::size_t i = 0; i < points; ++i) {
    k[i] = (0.01 + 0.29 * double(i) / double(points - 1)) / spec.L;
  }
  return k;
}

EffectiveRange effective_range_fit(const PotentialSpec& spec, std::span<const double> k_grid,
                                   EreBasis basis) {
  if (spec.critical()) throw NodeError("effective_range_fit: scattering length diverges");
  const std::size_t nb = basis == EreBasis::quartic ? 3 : 2;
  if (k_grid.size() < nb + 1) throw DomainError("effective_range_fit: too few grid points");

  EffectiveRange out;
  out.basis = basis;
  out.k_lo = k_grid.front();
  out.k_hi = k_grid.back();
  if (spec.alpha == 0.0) return out;  // δ ≡ 0, a0 = 0

  // Scaled regressor s = (kL)², so the normal matrix stays well conditioned.
  std::array<std::array<double, 4>, 3> A{};  // augmented normal system
  std::vector<double> y(k_grid.size()), s(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0)) throw DomainError("effective_range_fit: k must be positive");
    y[i] = k_cot_delta(spec, k_grid[i]) * spec.L;
    s[i] = k_grid[i] * k_grid[i] * spec.L * spec.L;
    const double phi[3] = {1.0, s[i], s[i] * s[i]};
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = 0; b < nb; ++b) A[a][b] += phi[a] * phi[b];
      A[a][3] += phi[a] * y[i];
    }
  }

  // Condition estimate from the diagonal-scaled matrix (Frobenius norms).
  std::array<std::array<double, 3>, 3> M{}, Minv{};
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) M[a][b] = A[a][b] / std::sqrt(A[a][a] * A[b][b]);
  {
    std::array<std::array<double, 6>, 3> G{};
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = 0; b < nb; ++b) G[a][b] = M[a][b];
      G[a][nb + a] = 1.0;
    }
    for (std::size_t c = 0; c < nb; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < nb; ++r)
        if (std::abs(G[r][c]) > std::abs(G[piv][c])) piv = r;
      std::swap(G[c], G[piv]);
      if (G[c][c] == 0.0) throw ConvergenceError("effective_range_fit: singular normal matrix", {}, 0.0);
      const double d = G[c][c];
      for (auto& v : G[c]) v /= d;
      for (std::size_t r = 0; r < nb; ++r) {
        if (r == c) continue;
        const double w = G[r][c];
        for (std::size_t j = 0; j < 2 * nb; ++j) G[r][j] -= w * G[c][j];
      }
    }
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t b = 0; b < nb; ++b) Minv[a][b] = G[a][nb + b];
  }
  double nm = 0.0, ni = 0.0;
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      nm += M[a][b] * M[a][b];
      ni += Minv[a][b] * Minv[a][b];
    }
  out.condition = std::sqrt(nm * ni);
  if (!(out.condition < 1e12)) {
    std::ostringstream msg;
    msg << "effective_range_fit: ill-conditioned fit (condition " << out.condition
        << "); widen the k window";
    throw ConvergenceError(msg.str(), {}, out.condition);
  }

  // Solve the scaled system.
  std::array<double, 3> rhs{}, coef{};
  for (std::size_t a = 0; a < nb; ++a) rhs[a] = A[a][3] / std::sqrt(A[a][a]);
  for (std::size_t a = 0; a < nb; ++a) {
    double z = 0.0;
    for (std::size_t b = 0; b < nb; ++b) z += Minv[a][b] * rhs[b];
    coef[a] = z / std::sqrt(A[a][a]);
  }

  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double model = coef[0] + coef[1] * s[i] + (nb == 3 ? coef[2] * s[i] * s[i] : 0.0);
    ss += (y[i] - model) * (y[i] - model);
  }
  out.fit_residual = std::sqrt(ss / double(y.size())) / spec.L;
  if (coef[0] == 0.0) throw NodeError("effective_range_fit: zero intercept (divergent a0)");
  out.a0 = -spec.L / coef[0];
  out.r0 = 2.0 * coef[1] * spec.L;
  return out;
}

Complex wk_value(const PotentialSpec& spec, double k, double r) {
  if (r < 0.0) throw DomainError("wk_value: r must be non-negative");
  if (k < 0.0) throw DomainError("wk_value: k must be non-negative");
  const double norm = std::sqrt(2.0 / kPi);
  if (k == 0.0) {
    if (spec.critical()) throw NodeError("wk_value: k = 0 at a zero-energy resonance");
    return 0.0;
  }
  const Complex f = jost(spec, k);
  const double af = std::abs(f);
  if (af == 0.0) throw NodeError("wk_value: f(k) = 0");
  if (r <= spec.L) return norm * std::sin(k * r) / af;
  const Complex e(std::cos(k * r), std::sin(k * r));
  return norm * (e * std::conj(f)).imag() / af;
}

ResonancePole resonance_pole(const PotentialSpec& spec, const PhysicalUnits& units, int n_guess) {
  units.validate();
  if (n_guess < 1) throw DomainError("resonance_pole: band index must be >= 1");
  auto f = [&spec](Complex k) { return jost(spec, k); };

  auto finish = [&](const numerics::RootResult& rr) {
    ResonancePole p;
    p.k_pole = rr.root;
    p.residual = rr.residual;
    p.E_pole = units.hbar * units.hbar * rr.root * rr.root / (2.0 * units.m);
    p.bound_state = rr.root.imag() > 0.0 && std::abs(rr.root.real()) < 1e-8 * std::abs(rr.root);
    if (p.bound_state) {
      p.k_pole = Complex(0.0, rr.root.imag());
      p.E_pole = -units.hbar * units.hbar * rr.root.imag() * rr.root.imag() / (2.0 * units.m);
      p.gamma = 0.0;
      p.tau = std::numeric_limits<double>::infinity();
    } else {
      p.gamma = -2.0 * p.E_pole.imag();
      p.tau = units.hbar / p.gamma;
    }
    return p;
  };

  if (spec.has_bound_state()) {
    // κ = -(α/2)(1 - e^{-2κL}) by fixed point, then polish with Newton.
    double kappa = -0.5 * spec.alpha;
    for (int i = 0; i < 200; ++i) kappa = -0.5 * spec.alpha * (1.0 - std::exp(-2.0 * kappa * spec.L));
    return finish(numerics::find_root_complex(f, Complex(0.0, kappa)));
  }

  const double k0 = n_guess * kPi / spec.L;
  numerics::RootResult rr;
  try {
    rr = numerics::find_root_complex(f, Complex(k0, -1e-3 * k0));
  } catch (const ConvergenceError&) {
    // Strong-barrier estimate nπ/L · αL/(1+αL) as a second seed.
    const double k1 = spec.coupling() != 0.0 ? k0 * spec.alpha * spec.L / spec.coupling() : k0;
    rr = numerics::find_root_complex(f, Complex(k1, -1e-3 * k0));
  }
  if (rr.root.real() < 0.0) rr.root = Complex(-rr.root.real(), rr.root.imag());  // mirror pole
  ResonancePole p = finish(rr);
  if (!p.bound_state && !(rr.root.imag() < 0.0)) {
    throw ConvergenceError("resonance_pole: root left the lower half plane", rr.root, rr.residual);
  }
  return p;
}

}  // namespace decaylab
