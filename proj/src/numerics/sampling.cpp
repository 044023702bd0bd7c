#include "decaylab/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab::numerics {

InverseCdfSampler::InverseCdfSampler(CubicSpline density) : density_(std::move(density)) {
  if (density_.empty()) throw DomainError("InverseCdfSampler: empty density table");
  const std::size_t n = density_.size();
  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Tiny negative interpolation dips near double zeros would make the CDF
    // non-monotone; clip each interval contribution at zero.
    cumulative_[i + 1] = cumulative_[i] + std::max(0.0, density_.interval_integral(i));
  }
  mass_ = cumulative_.back();
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw DomainError("InverseCdfSampler: density has zero (or non-finite) total mass");
  }
}

double InverseCdfSampler::cdf(double x) const {
  if (x <= density_.front()) return 0.0;
  if (x >= density_.back()) return 1.0;
  const std::size_t i = density_.locate(x);
  const double part = std::clamp(density_.partial_integral(i, x - density_.x()[i]), 0.0,
                                 cumulative_[i + 1] - cumulative_[i]);
  return (cumulative_[i] + part) / mass_;
}

double InverseCdfSampler::operator()(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("InverseCdfSampler: u must lie in [0, 1)");
  const double target = u * mass_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = it == cumulative_.begin() ? 0 : std::size_t(it - cumulative_.begin()) - 1;
  i = std::min(i, density_.size() - 2);
  // Skip zero-mass intervals so the map stays strictly inside the support.
  while (i + 2 < density_.size() && cumulative_[i + 1] <= target) ++i;

  const double x0 = density_.x()[i];
  const double h = density_.x()[i + 1] - x0;
  const double need = target - cumulative_[i];
  const double have = cumulative_[i + 1] - cumulative_[i];
  if (!(have > 0.0)) return x0;

  // Safeguarded Newton on the exact quartic partial integral.
  double lo = 0.0, hi = h;
  double d = h * need / have;
  for (int it_n = 0; it_n < 60; ++it_n) {
    const double F = density_.partial_integral(i, d) - need;
    if (F > 0.0) hi = d; else lo = d;
    const double rho = density_.value_in(i, d);
    double next = rho > 0.0 ? d - F / rho : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - d) <= 1e-15 * (x0 + h) || hi - lo <= 1e-15 * (std::abs(x0) + h)) {
      d = next;
      break;
    }
    d = next;
  }
  return x0 + d;
}

double sample_inverse_cdf(const CubicSpline& density, double u) {
  return InverseCdfSampler(density)(u);
}

}  // namespace decaylab::numerics
