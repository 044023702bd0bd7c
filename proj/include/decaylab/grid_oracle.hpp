#pragma once

#include <span>
#include <vector>

#include "decaylab/quantum.hpp"
#include "decaylab/scattering.hpp"
#include "decaylab/trace.hpp"

namespace decaylab {

struct GridOracleOptions {
  double r_max = 60.0;
  double dr = 0.0025;
  double dt = 2.5e-4;
  // Quadratic complex absorbing potential -i W0 ((r - r_abs)/(r_max - r_abs))²
  // on [r_abs, r_max]; W0 in energy units.
  double absorber_start = 20.0;
  double absorber_strength = 20.0;
};

struct GridOracleResult {
  DensityTrace trace;
  std::vector<double> norms;  // ∫|ψ|² dr over the whole grid at each requested time
};

/// Crank-Nicolson propagation of the initial state on a uniform radial grid
/// (hard wall at r = 0, delta as on-site α·ħ²/(2m dr) at the node nearest L).
/// Times must be non-negative and increasing; each is hit exactly.
GridOracleResult grid_oracle(const PotentialSpec& spec, const InitialState& state,
                             const PhysicalUnits& units, double r, std::span<const double> times,
                             const GridOracleOptions& opts = {});

}  // namespace decaylab
