#include "decaylab/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decaylab/errors.hpp"

namespace decaylab::numerics {

RootResult find_root_complex(const std::function<std::complex<double>(std::complex<double>)>& f,
                             std::complex<double> z0, const RootOptions& opts) {
  using C = std::complex<double>;
  std::ostringstream trace;
  auto fail = [&](const std::string& why, C z, double res) -> RootResult {
    throw ConvergenceError("find_root_complex: " + why + "\n" + trace.str(), z, res);
  };

  C z = z0;
  C fz = f(z);
  double res = std::abs(fz);
  trace << "  iter 0: z = " << z << ", |f| = " << res << "\n";
  if (!std::isfinite(res)) return fail("f is not finite at the seed", z, res);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    if (res <= opts.tol) return {z, res, it - 1};

    const double h = opts.fd_step * std::max(1.0, std::abs(z));
    const C slope = (f(z + h) - f(z - h)) / (2.0 * h);
    if (!(std::abs(slope) > 0.0) || !std::isfinite(std::abs(slope))) {
      return fail("vanishing or non-finite derivative", z, res);
    }
    C step = fz / slope;

    // Backtrack until the residual decreases.
    C z_new = z - step;
    C f_new = f(z_new);
    int halvings = 0;
    while (!(std::abs(f_new) < res) && halvings < 30) {
      step *= 0.5;
      z_new = z - step;
      f_new = f(z_new);
      ++halvings;
    }
    if (!(std::abs(f_new) < res)) {
      if (res <= 100.0 * opts.tol) return {z, res, it};
      return fail("stagnated (no descent direction)", z, res);
    }
    z = z_new;
    fz = f_new;
    res = std::abs(fz);
    trace << "  iter " << it << ": z = " << z << ", |f| = " << res << "\n";
    if (!std::isfinite(std::abs(z))) return fail("diverged", z, res);
  }
  if (res <= opts.tol) return {z, res, opts.max_iterations};
  return fail("iteration cap reached", z, res);
}

}  // namespace decaylab::numerics
