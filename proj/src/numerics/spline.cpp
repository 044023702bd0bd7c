#include "decaylab/numerics/spline.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab::numerics {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y,
                         std::optional<double> left_slope, std::optional<double> right_slope)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need >= 2 nodes with matching values");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) throw DomainError("CubicSpline: nodes must be strictly increasing");
  }

  // Solve for the second derivatives M_i (tridiagonal, Thomas algorithm).
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  const double hl = x_[1] - x_[0];
  if (left_slope) {
    diag[0] = hl / 3.0;
    sup[0] = hl / 6.0;
    rhs[0] = (y_[1] - y_[0]) / hl - *left_slope;
  } else {
    diag[0] = 1.0;
  }
  const double hr = x_[n - 1] - x_[n - 2];
  if (right_slope) {
    sub[n - 1] = hr / 6.0;
    diag[n - 1] = hr / 3.0;
    rhs[n - 1] = *right_slope - (y_[n - 1] - y_[n - 2]) / hr;
  } else {
    diag[n - 1] = 1.0;
  }

  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];

  b_.resize(n - 1);
  c_.resize(n - 1);
  e_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    b_[i] = (y_[i + 1] - y_[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
    c_[i] = 0.5 * m[i];
    e_[i] = (m[i + 1] - m[i]) / (6.0 * h);
  }
}

std::size_t CubicSpline::locate(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : std::size_t(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::value_in(std::size_t i, double d) const {
  return y_[i] + d * (b_[i] + d * (c_[i] + d * e_[i]));
}

double CubicSpline::operator()(double x) const {
  if (x_.empty() || x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t i = locate(x);
  return value_in(i, x - x_[i]);
}

double CubicSpline::derivative(double x) const {
  if (x_.empty() || x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t i = locate(x);
  const double d = x - x_[i];
  return b_[i] + d * (2.0 * c_[i] + 3.0 * d * e_[i]);
}

double CubicSpline::partial_integral(std::size_t i, double d) const {
  return d * (y_[i] + d * (b_[i] / 2.0 + d * (c_[i] / 3.0 + d * e_[i] / 4.0)));
}

double CubicSpline::interval_integral(std::size_t i) const {
  return partial_integral(i, x_[i + 1] - x_[i]);
}

}  // namespace decaylab::numerics
