#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/errors.hpp"

using namespace decaylab;
using std::numbers::pi;

namespace {

DensityTrace sample(const std::vector<double>& times, double (*f)(double)) {
  DensityTrace tr;
  tr.times = times;
  for (double t : times) tr.values.push_back(f(t));
  return tr;
}

double synthetic(double t) { return std::max(std::exp(-t / 0.5), 1e-3 / (t * t * t)); }

// e^{-2t} = 1e-3 t^{-3} beyond the early intersection.
double synthetic_crossing() {
  double lo = 3.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::exp(-2.0 * mid) > 1e-3 / (mid * mid * mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Tails, ClosedForms) {
  EXPECT_DOUBLE_EQ(quantum_tail(2.0, 0.5, 3.0, 2.0), 2.0 * 6.25 / 8.0);
  EXPECT_DOUBLE_EQ(classical_tail(2.0, 3.0, 2.0), quantum_tail(2.0, 0.0, 3.0, 2.0));
  EXPECT_THROW(quantum_tail(1.0, 0.0, 1.0, 0.0), DomainError);
}

TEST(Tails, FigureThreeAmplitude) {
  const PhysicalUnits u;
  const auto law = winter_joint_law(u, 5.0, 1.0, 1, 2.0);
  EXPECT_NEAR(law.amplitude, 6.10e-4, 0.005e-4);
  EXPECT_NEAR(law(100.0), 6.10e-10, 0.005e-10);
  EXPECT_NEAR(law.shift_a0, 5.0 / 6.0, 1e-15);
}

TEST(Tails, ResonantAmplitude) {
  const PhysicalUnits u;
  EXPECT_NEAR(resonant_tail(u, 1.0, 1, 1.0), 2.0 / (pi * pi * pi), 1e-15);
  EXPECT_NEAR(resonant_tail(u, 1.0, 1, 7.0) * 7.0, resonant_tail(u, 1.0, 1, 300.0) * 300.0, 1e-15);
  EXPECT_THROW(winter_joint_law(u, -1.0, 1.0, 1, 2.0), DomainError);
}

TEST(PowerLaw, ExactDataRecovered) {
  const auto times = make_time_grid(10.0, 1000.0, 40, true);
  const auto tr = sample(times, [](double t) { return 6.1e-4 / (t * t * t); });
  const auto fit = fit_power_law(tr, {10.0, 1000.0});
  EXPECT_NEAR(fit.slope, -3.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept) / 6.1e-4, 1.0, 1e-10);
  EXPECT_EQ(fit.points, 40u);
}

TEST(PowerLaw, NeedsEightSamples) {
  const auto times = make_time_grid(1.0, 100.0, 20, true);
  const auto tr = sample(times, [](double t) { return 1.0 / t; });
  EXPECT_THROW(fit_power_law(tr, {1.0, 3.0}), DomainError);
  EXPECT_THROW(fit_power_law(tr, {5.0, 2.0}), DomainError);
}

TEST(LocalSlope, PowerAndExponential) {
  const auto times = make_time_grid(1.0, 100.0, 60, true);
  for (double s : local_slope(sample(times, [](double t) { return 1.0 / (t * t * t); })))
    EXPECT_NEAR(s, -3.0, 1e-12);
  const auto dense = make_time_grid(0.1, 5.0, 2000, true);
  const auto slopes = local_slope(sample(dense, [](double t) { return std::exp(-t / 0.5); }));
  for (std::size_t i = 1; i + 1 < dense.size(); i += 100) EXPECT_NEAR(slopes[i], -dense[i] / 0.5, 1e-4);
}

TEST(Transition, SyntheticCrossing) {
  const auto times = make_time_grid(0.5, 20.0, 40, false);
  ASSERT_NEAR(times[1] - times[0], 0.5, 1e-12);
  const auto res = detect_transition(sample(times, synthetic), 0.5);
  EXPECT_NEAR(res.t_star, synthetic_crossing(), 0.5);
  EXPECT_NEAR(res.offset, 0.0, 1e-9);
}

TEST(Transition, PurePowerLawFails) {
  const auto times = make_time_grid(0.5, 200.0, 100, true);
  EXPECT_THROW(detect_transition(sample(times, [](double t) { return 1.0 / (t * t * t); }), 0.5), DomainError);
}

TEST(Transition, PureExponentialHasNoDeparture) {
  const auto times = make_time_grid(0.5, 20.0, 40, false);
  EXPECT_THROW(detect_transition(sample(times, [](double t) { return std::exp(-2.0 * t); }), 0.5), DomainError);
}

TEST(Transition, ShortBeatsDoNotCountAsReturns) {
  // Power law with a beat that dips back onto the exponential line briefly.
  auto f = [](double t) {
    const double e = std::exp(-2.0 * t), p = 1e-3 / (t * t * t);
    return std::pow(std::sqrt(e) + std::sqrt(p) * std::cos(8.0 * t), 2) + 1e-300;
  };
  const auto times = make_time_grid(0.05, 30.0, 600, false);
  DensityTrace tr;
  tr.times = times;
  for (double t : times) tr.values.push_back(f(t));
  const auto res = detect_transition(tr, 0.5);
  EXPECT_GT(res.t_star, 4.0);
  EXPECT_LT(res.t_star, 7.0);
}

TEST(Compare, IdenticalAndSymmetric) {
  const auto times = make_time_grid(1.0, 10.0, 20, true);
  const auto a = sample(times, [](double t) { return 1.0 / t; });
  const auto b = sample(times, [](double t) { return 1.2 / t; });
  const auto same = compare_traces(a, a, {1.0, 10.0});
  EXPECT_EQ(same.max_rel_dev, 0.0);
  EXPECT_FALSE(same.mismatch);
  const auto ab = compare_traces(a, b, {1.0, 10.0});
  const auto ba = compare_traces(b, a, {1.0, 10.0});
  EXPECT_DOUBLE_EQ(ab.max_rel_dev, ba.max_rel_dev);
  EXPECT_NEAR(ab.max_rel_dev, 0.2 / 1.2, 1e-14);
  EXPECT_NEAR(ab.mean_ratio, 1.0 / 1.2, 1e-14);
  EXPECT_TRUE(ab.mismatch);
}

TEST(Compare, GridMismatchThrows) {
  const auto a = sample(make_time_grid(1.0, 10.0, 20, true), [](double t) { return 1.0 / t; });
  const auto b = sample(make_time_grid(1.0, 10.0, 21, true), [](double t) { return 1.0 / t; });
  EXPECT_THROW(compare_traces(a, b, {1.0, 10.0}), DomainError);
}
