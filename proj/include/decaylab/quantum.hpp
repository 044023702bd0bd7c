#pragma once

#include <complex>
#include <span>
#include <vector>

#include "decaylab/scattering.hpp"
#include "decaylab/trace.hpp"

namespace decaylab {

/// n-th infinite-well eigenstate on [0, L], zero outside.
struct InitialState {
  int n = 1;
  double L = 1.0;

  void validate() const;
  double r_a() const { return L; }
  double value(double r) const;
};

/// ∫₀^L sin(kr) ⟨r|Ψ₀⟩ dr in closed form (series near kL = nπ).
double overlap_integral(const InitialState& state, double k);

/// ⟨w_k|Ψ₀⟩ for k ≥ 0. Real in the e^{-iδ} convention; k = 0 is the limit.
Complex overlap(const PotentialSpec& spec, const InitialState& state, double k);

/// |⟨w_k|Ψ₀⟩|².
double overlap_density(const PotentialSpec& spec, const InitialState& state, double k);

/// ρ(v) = |⟨w_k|Ψ₀⟩|² m/ħ at k = mv/ħ.
double velocity_density_at(const PotentialSpec& spec, const InitialState& state,
                           const PhysicalUnits& units, double v);

struct VelocityDensity {
  std::vector<double> v;
  std::vector<double> rho;
  double beta_smallv = 0.0;  // quadratic coefficient from the three smallest nodes
  double rho_zero = 0.0;     // constant term of the same fit
  double mass = 0.0;         // ∫ρ dv of the natural spline through the grid
  bool bound_state = false;  // normalization deficit expected
};

VelocityDensity velocity_density(const PotentialSpec& spec, const InitialState& state,
                                 const PhysicalUnits& units, std::span<const double> v_grid);

/// Smallest K with the analytic k⁻⁴ bound on ∫_K^∞ |c|² dk below eps.
double completeness_cutoff(const PotentialSpec& spec, const InitialState& state, double eps = 1e-8);

/// Node set for tabulating ρ(v) on [0, v_max]: geometric near 0, capped at
/// 1/64 of the oscillation period in v.
std::vector<double> velocity_nodes(const PotentialSpec& spec, const InitialState& state,
                                   const PhysicalUnits& units, double v_max);

/// ρ tabulated on velocity_nodes up to ħK/m with K = completeness_cutoff.
VelocityDensity velocity_table(const PotentialSpec& spec, const InitialState& state,
                               const PhysicalUnits& units);

struct SpectralAmplitude {
  std::vector<double> k_grid;
  std::vector<Complex> c;
  double kmax = 0.0;
};

SpectralAmplitude spectral_amplitude(const PotentialSpec& spec, const InitialState& state,
                                     std::span<const double> k_grid);

/// ∫₀^kmax |c(k)|² dk.
double completeness(const PotentialSpec& spec, const InitialState& state, double kmax);

struct PsiOptions {
  double tol = 1e-10;     // absolute, on Ψ (t > 0)
  double tol_t0 = 1e-4;   // absolute, on Ψ at t = 0 (no oscillatory tail available)
  unsigned threads = 1;   // for traces
};

/// Ψ(r, t) = ∫ c(k) w_k(r) e^{-iħk²t/2m} dk.
Complex psi(const PotentialSpec& spec, const InitialState& state, const PhysicalUnits& units,
            double r, double t, const PsiOptions& opts = {});

double density_quantum(const PotentialSpec& spec, const InitialState& state,
                       const PhysicalUnits& units, double r, double t, const PsiOptions& opts = {});

DensityTrace density_trace_quantum(const PotentialSpec& spec, const InitialState& state,
                                   const PhysicalUnits& units, double r,
                                   std::span<const double> times, const PsiOptions& opts = {});

/// |∫ |c|² e^{-iħk²t/2m} dk|².
double survival_probability(const PotentialSpec& spec, const InitialState& state,
                            const PhysicalUnits& units, double t, const PsiOptions& opts = {});

}  // namespace decaylab
