#pragma once

#include <array>
#include <string>
#include <type_traits>

#include "decaylab/errors.hpp"

namespace decaylab::numerics {

inline constexpr int kMaxDerivativeOrder = 4;

namespace detail {

// Second-order central difference for derivative `order` with step h.
template <class F>
auto central_difference(F& g, double x, int order, double h) {
  switch (order) {
    case 1:
      return (g(x + h) - g(x - h)) / (2.0 * h);
    case 2:
      return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    case 3:
      return (g(x + 2.0 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2.0 * h)) /
             (2.0 * h * h * h);
    default:
      return (g(x + 2.0 * h) - 4.0 * g(x + h) + 6.0 * g(x) - 4.0 * g(x - h) + g(x - 2.0 * h)) /
             (h * h * h * h);
  }
}

}  // namespace detail

/// n-th derivative of g at x0 by central differences, Richardson-extrapolated
/// over two step halvings (h, h/2, h/4). Orders 0..4.
template <class F>
auto numeric_derivative(F&& g, double x0, int order, double h) {
  using R = std::decay_t<std::invoke_result_t<F&, double>>;
  if (order < 0 || order > kMaxDerivativeOrder) {
    throw DomainError("numeric_derivative: unsupported order " + std::to_string(order));
  }
  if (!(h > 0.0)) throw DomainError("numeric_derivative: step must be positive");
  if (order == 0) return R(g(x0));

  std::array<R, 3> d{};
  for (int i = 0; i < 3; ++i) d[i] = detail::central_difference(g, x0, order, h / double(1 << i));
  const R r1 = (4.0 * d[1] - d[0]) / 3.0;
  const R r2 = (4.0 * d[2] - d[1]) / 3.0;
  return R((16.0 * r2 - r1) / 15.0);
}

}  // namespace decaylab::numerics
