#include "decaylab/grid_oracle.hpp"

#include <cmath>
#include <complex>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

// Tridiagonal solve with constant off-diagonal `off` and per-node diagonal.
// The forward sweep factors are cached for a given time step.
struct CrankNicolson {
  std::vector<Complex> diag_lhs, diag_rhs;
  Complex off_lhs, off_rhs;
  std::vector<Complex> cprime, denom;

  CrankNicolson(const std::vector<double>& V, const std::vector<double>& W, double kin, double dt,
                double hbar) {
    const std::size_t n = V.size();
    const Complex iz(0.0, 0.5 * dt / hbar);
    off_lhs = iz * (-kin);
    off_rhs = -iz * (-kin);
    diag_lhs.resize(n);
    diag_rhs.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex h = 2.0 * kin + V[j] - Complex(0.0, W[j]);
      diag_lhs[j] = 1.0 + iz * h;
      diag_rhs[j] = 1.0 - iz * h;
    }
    cprime.resize(n);
    denom.resize(n);
    denom[0] = diag_lhs[0];
    cprime[0] = off_lhs / denom[0];
    for (std::size_t j = 1; j < n; ++j) {
      denom[j] = diag_lhs[j] - off_lhs * cprime[j - 1];
      cprime[j] = off_lhs / denom[j];
    }
  }

  void step(std::vector<Complex>& psi, std::vector<Complex>& work) const {
    const std::size_t n = psi.size();
    for (std::size_t j = 0; j < n; ++j) {
      Complex b = diag_rhs[j] * psi[j];
      if (j > 0) b += off_rhs * psi[j - 1];
      if (j + 1 < n) b += off_rhs * psi[j + 1];
      work[j] = b;
    }
    work[0] /= denom[0];
    for (std::size_t j = 1; j < n; ++j) work[j] = (work[j] - off_lhs * work[j - 1]) / denom[j];
    for (std::size_t j = n - 1; j-- > 0;) work[j] -= cprime[j] * work[j + 1];
    psi.swap(work);
  }
};

}  // namespace

GridOracleResult grid_oracle(const PotentialSpec& spec, const InitialState& state,
                             const PhysicalUnits& units, double r, std::span<const double> times,
                             const GridOracleOptions& o) {
  units.validate();
  state.validate();
  if (!(o.dr > 0.0) || !(o.dt > 0.0)) throw DomainError("grid oracle: dr and dt must be positive");
  if (!(o.r_max > 2.0 * state.L)) throw DomainError("grid oracle: r_max too small");
  if (!(o.absorber_start > state.L && o.absorber_start < o.r_max))
    throw DomainError("grid oracle: absorber must start beyond L and before r_max");
  if (!(r >= 0.0 && r < o.absorber_start)) throw DomainError("grid oracle: r must lie before the absorber");

  // Interior nodes r_j = j dr, j = 1..N-1; ψ(0) = ψ(r_max) = 0.
  const std::size_t N = std::size_t(std::llround(o.r_max / o.dr));
  const std::size_t n = N - 1;
  const double kin = units.hbar * units.hbar / (2.0 * units.m * o.dr * o.dr);
  std::vector<double> V(n, 0.0), W(n, 0.0);
  const std::size_t jL = std::size_t(std::llround(spec.L / o.dr));
  if (jL >= 1 && jL <= n) V[jL - 1] = units.hbar * units.hbar * spec.alpha / (2.0 * units.m * o.dr);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = double(j + 1) * o.dr;
    if (x > o.absorber_start) {
      const double u = (x - o.absorber_start) / (o.r_max - o.absorber_start);
      W[j] = o.absorber_strength * u * u;
    }
  }

  std::vector<Complex> psi(n), work(n);
  for (std::size_t j = 0; j < n; ++j) psi[j] = state.value(double(j + 1) * o.dr);
  auto norm = [&] {
    double s = 0.0;
    for (const auto& z : psi) s += std::norm(z);
    return s * o.dr;
  };
  // Renormalize the sampled state so the discrete norm starts at 1.
  const double n0 = std::sqrt(norm());
  for (auto& z : psi) z /= n0;

  auto sample = [&] {
    const double x = r / o.dr;
    const std::size_t j = std::size_t(std::floor(x));
    const double w = x - double(j);
    auto at = [&](std::size_t jj) { return (jj == 0 || jj > n) ? Complex{} : psi[jj - 1]; };
    return std::norm((1.0 - w) * at(j) + w * at(j + 1));
  };

  const CrankNicolson full(V, W, kin, o.dt, units.hbar);
  GridOracleResult out;
  out.trace.r = r;
  out.trace.provenance = Provenance::quantum_grid;
  double t = 0.0;
  for (double target : times) {
    if (!(target >= t)) throw DomainError("grid oracle: times must be increasing and non-negative");
    const double eps = 1e-9 * o.dt;
    while (t + o.dt <= target + eps) {
      full.step(psi, work);
      t += o.dt;
    }
    if (target - t > eps) {
      const CrankNicolson partial(V, W, kin, target - t, units.hbar);
      partial.step(psi, work);
    }
    t = target;
    const double nn = norm();
    if (!std::isfinite(nn) || nn > 1.0 + 1e-6)
      throw ConvergenceError("grid oracle: norm blow-up", {}, nn);
    out.trace.times.push_back(target);
    out.trace.values.push_back(sample());
    out.norms.push_back(nn);
  }
  out.trace.validate();
  return out;
}

}  // namespace decaylab
