#pragma once

#include <optional>
#include <span>
#include <vector>

namespace decaylab::numerics {

/// C² cubic spline on strictly increasing nodes. Each end is clamped to a
/// given slope or left natural. Evaluates to zero outside [x.front(), x.back()],
/// which is what the density tables here need.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y,
              std::optional<double> left_slope = std::nullopt,
              std::optional<double> right_slope = std::nullopt);

  double operator()(double x) const;
  double derivative(double x) const;

  /// Exact ∫ over node interval i.
  double interval_integral(std::size_t i) const;
  /// Exact ∫ from x_i to x_i + d, 0 <= d <= h_i.
  double partial_integral(std::size_t i, double d) const;
  /// Value on interval i at offset d (no range check).
  double value_in(std::size_t i, double d) const;

  /// Index i with x_i <= x < x_{i+1}; x must lie inside the table.
  std::size_t locate(double x) const;

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

private:
  std::vector<double> x_, y_;
  // Per-interval coefficients of y_i + b d + c d² + e d³.
  std::vector<double> b_, c_, e_;
};

}  // namespace decaylab::numerics
