#pragma once

// Adaptive Gauss-Kronrod quadrature and a panel integrator for integrals of
// the form  ∫_a^kmax g(k) exp(-i φ(k)) dk  (+ asymptotic tail beyond kmax).

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace decaylab::numerics {

using Complex = std::complex<double>;
using RealFunction = std::function<double(double)>;
using ComplexFunction = std::function<Complex(double)>;

struct Tolerance {
  double abs = 1e-9;
  double rel = 0.0;

  double target(double magnitude) const noexcept {
    const double r = rel * magnitude;
    return abs > r ? abs : r;
  }
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct AdaptiveOptions {
  Tolerance tol{};
  std::size_t max_intervals = 20000;
  // Interior points where the integrand has kinks or sharp features. Ignored
  // when the upper limit is infinite.
  std::vector<double> breakpoints{};
};

namespace detail {
QuadratureResult<double> adaptive_real(const RealFunction& f, double a, double b,
                                       const AdaptiveOptions& opts);
QuadratureResult<Complex> adaptive_complex(const ComplexFunction& f, double a, double b,
                                           const AdaptiveOptions& opts);
}  // namespace detail

/// Globally adaptive Gauss-Kronrod (10/21) integration of f over [a, b].
/// `b` may be +infinity, in which case the range is mapped onto [0, 1).
/// Throws ConvergenceError (with the best estimate) when the interval budget
/// is exhausted and IntegrandError when f returns a non-finite value.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (std::is_same_v<std::decay_t<R>, Complex>) {
    return detail::adaptive_complex(ComplexFunction(std::forward<F>(f)), a, b, opts);
  } else {
    return detail::adaptive_real(RealFunction(std::forward<F>(f)), a, b, opts);
  }
}

/// Phase function φ(k) with its slope. The integrand carries exp(-i φ).
struct Phase {
  RealFunction value;
  RealFunction rate;

  /// φ(k) = quadratic·k² + linear·k
  static Phase polynomial(double quadratic, double linear = 0.0);
};

enum class TailMode {
  none,        // integral ends at kmax; nothing beyond
  asymptotic,  // add the endpoint expansion of ∫_kmax^∞ and bound its remainder
};

struct OscillatoryOptions {
  double tol = 1e-9;
  TailMode tail = TailMode::asymptotic;
  // Largest angular rate at which the envelope oscillates by itself.
  double envelope_frequency = 0.0;
  // Majorant |g(k)| <= envelope_bound * k^-decay_power for k >= kmax.
  double envelope_bound = std::numeric_limits<double>::infinity();
  double decay_power = 2.0;
  // Panels span at most this fraction of the local oscillation period.
  double panel_fraction = 0.25;
  std::size_t max_panels = 50'000'000;
};

struct TailEstimate {
  Complex correction{};  // approximation to ∫_kmax^∞ g e^{-iφ}
  double error = 0.0;    // bound on |true tail - correction|
  bool asymptotic = false;
};

/// Estimate of the integral beyond kmax.
///
/// When the phase is non-stationary at kmax (|φ'| well above the envelope's
/// own frequency) the tail is replaced by three terms of its integration-by-
/// parts expansion and the last applied term is reported as the error.
/// Otherwise the absolute majorant C kmax^(1-p)/(p-1) is used. A finite
/// envelope_bound that g(kmax) violates raises TailBoundError.
TailEstimate oscillatory_tail(const ComplexFunction& g, const Phase& phase, double kmax,
                              const OscillatoryOptions& opts);

/// ∫_a^kmax g(k) e^{-iφ(k)} dk plus the tail estimate above. Panels follow the
/// local phase rate; each panel is integrated with Gauss-Kronrod 7/15 and
/// bisected if its error share is exceeded.
QuadratureResult<Complex> integrate_oscillatory(const ComplexFunction& g, const Phase& phase,
                                                double a, double kmax,
                                                const OscillatoryOptions& opts);

}  // namespace decaylab::numerics
