#pragma once

#include <complex>
#include <functional>

namespace decaylab::numerics {

struct RootResult {
  std::complex<double> root{};
  double residual = 0.0;  // |f(root)|
  int iterations = 0;
};

struct RootOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  double fd_step = 1e-7;  // relative to max(1, |z|)
};

/// Damped Newton iteration with a central finite-difference derivative.
/// Throws ConvergenceError, whose message carries the iteration trace, on
/// divergence, stagnation or when the iteration cap is hit.
RootResult find_root_complex(const std::function<std::complex<double>(std::complex<double>)>& f,
                             std::complex<double> z0, const RootOptions& opts = {});

}  // namespace decaylab::numerics
