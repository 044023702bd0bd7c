#pragma once

#include <vector>

#include "decaylab/numerics/spline.hpp"

namespace decaylab::numerics {

/// Inverse-CDF sampler for a tabulated non-negative density (cubic spline).
/// The CDF is the exact integral of the spline, so sampling is consistent
/// with any quadrature done on the same table.
class InverseCdfSampler {
public:
  explicit InverseCdfSampler(CubicSpline density);

  /// Map u in [0,1) to a variate. Monotone in u.
  double operator()(double u) const;

  /// Normalized CDF at x.
  double cdf(double x) const;
  double total_mass() const { return mass_; }
  const CubicSpline& density() const { return density_; }

private:
  CubicSpline density_;
  std::vector<double> cumulative_;  // unnormalized, at nodes
  double mass_ = 0.0;
};

/// One-shot form; builds the cumulative table on every call.
double sample_inverse_cdf(const CubicSpline& density, double u);

}  // namespace decaylab::numerics
