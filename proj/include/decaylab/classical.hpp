#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "decaylab/numerics/spline.hpp"
#include "decaylab/quantum.hpp"
#include "decaylab/trace.hpp"

namespace decaylab {

/// Exponential point emitter at r_source with a tabulated speed density.
struct SourceModel {
  double tau = 1.0;
  double r_source = 0.0;
  numerics::CubicSpline rho;  // ρ(v), zero beyond the table

  SourceModel() = default;
  SourceModel(double tau_, double r_source_, numerics::CubicSpline rho_);

  /// Clamped spline (zero slope at v = 0 unless told otherwise, natural at v_max).
  static SourceModel from_table(double tau, double r_source, const VelocityDensity& table);

  double v_max() const { return rho.back(); }
  void validate() const;
};

struct McConfig {
  std::size_t n_particles = 1'000'000;
  std::uint64_t seed = 1;
  double bin_width_t = 0.0;   // 0: snapshot at t; > 0: exact average over [t-w/2, t+w/2]
  double bin_width_r = 0.02;  // top-hat width around r
  std::size_t partitions = 64;
  unsigned threads = 1;

  void validate() const;
};

/// e^{-t0/τ}/τ.
double emission_density(double tau, double t0);

/// (1/τv) e^{-(t - r/v)/τ} for t > r/v, else 0.
double monoenergetic_density(double tau, double v, double r, double t);

struct ClassicalOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
};

/// ∫₀^t dt0 ρ(r_c/(t-t0)) e^{-t0/τ} / ((t-t0)τ), r_c = r - r_source.
double classical_density(const SourceModel& source, double r, double t, const ClassicalOptions& o = {});

/// Same density in the velocity variable: ∫_{r_c/t}^{v_max} ρ(v) e^{-(t - r_c/v)/τ}/(τv) dv.
double classical_density_velocity(const SourceModel& source, double r, double t,
                                  const ClassicalOptions& o = {});

/// Σ_{n≤m} τⁿ g⁽ⁿ⁾(0), g(t0) = ρ(r_c/(t-t0))/(t-t0). The g⁽ⁿ⁾(t) e^{-t/τ}
/// terms vanish for tables with compact support. Requires t > 5τ, m ≤ 4.
double asymptotic_series(const SourceModel& source, double r, double t, int order);

DensityTrace classical_trace(const SourceModel& source, double r, std::span<const double> times,
                             unsigned threads = 1, const ClassicalOptions& o = {});

/// Particles with t0 ~ Exp(τ) and v ~ ρ (inverse CDF of the same table);
/// density from a top-hat bin around r. Deterministic for a given seed,
/// independent of the thread count.
DensityTrace monte_carlo_trace(const SourceModel& source, const McConfig& mc, double r,
                               std::span<const double> times);

}  // namespace decaylab
