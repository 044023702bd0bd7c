#pragma once

#include <vector>

#include "decaylab/scattering.hpp"
#include "decaylab/trace.hpp"

namespace decaylab {

enum class TailForm { quantum_tail, classical_tail, winter_joint, resonant };

/// amplitude · t^exponent at a fixed observation point.
struct AsymptoticLaw {
  double amplitude = 0.0;
  double exponent = -3.0;
  double shift_a0 = 0.0;
  TailForm form = TailForm::quantum_tail;

  double operator()(double t) const;
};

double quantum_tail(double beta, double a0, double r, double t);
double classical_tail(double beta, double r, double t);
double winter_beta(const PhysicalUnits& units, double alpha, double L, int n);
double winter_joint_tail(const PhysicalUnits& units, double alpha, double L, int n, double r, double t);
double resonant_tail(const PhysicalUnits& units, double L, int n, double t);

AsymptoticLaw winter_joint_law(const PhysicalUnits& units, double alpha, double L, int n, double r);
AsymptoticLaw resonant_law(const PhysicalUnits& units, double L, int n);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // ln amplitude
  Window window;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln P on ln t over samples with lo ≤ t ≤ hi (≥ 8 needed).
PowerLawFit fit_power_law(const DensityTrace& trace, Window window);

/// d ln P / d ln t: centred differences inside, one-sided at the ends.
std::vector<double> local_slope(const DensityTrace& trace);

struct TransitionResult {
  double t_star = 0.0;
  Window epoch;        // exponential epoch used for the reference line
  double offset = 0.0; // c in ln P ≈ c - t/τ
};

/// The exponential epoch is the earliest window spanning >= 6τ (>= 8 samples)
/// whose samples all lie within a factor 2 of the line ln P = c - t/τ, with c
/// the window mean of ln P + t/τ. t_star is where the trace leaves that band
/// for good: later returns shorter than 2τ (interference beats) are ignored.
/// Interpolated linearly at the crossing. Throws DomainError when no epoch or
/// no lasting departure exists.
TransitionResult detect_transition(const DensityTrace& trace, double tau);

struct TraceComparison {
  double max_rel_dev = 0.0;   // max |a-b|/max(a,b)
  double mean_rel_dev = 0.0;
  double mean_ratio = 1.0;    // mean a/b
  bool mismatch = false;      // max_rel_dev above the threshold
  std::size_t points = 0;
};

/// Throws DomainError if the traces do not share their time samples on the window.
TraceComparison compare_traces(const DensityTrace& a, const DensityTrace& b, Window window,
                               double mismatch_threshold = 0.1);

}  // namespace decaylab
