#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/numerics/quadrature.hpp"
#include "decaylab/quantum.hpp"

using namespace decaylab;
using std::numbers::pi;

namespace {

const PhysicalUnits kUnits{};
const InitialState kState{1, 1.0};

// Free evolution on the half-line by the method of images:
// ψ(r,t) = ∫₀^L [G(r-r') - G(r+r')] ψ₀(r') dr',  G(x) = (m/2πiħt)^{1/2} e^{imx²/2ħt}.
double free_density_images(double r, double t) {
  const double m = kUnits.m, hbar = kUnits.hbar;
  const Complex pref = std::sqrt(Complex(m / (2.0 * pi * hbar * t)) / Complex(0.0, 1.0));
  auto G = [&](double x) { return pref * std::exp(Complex(0.0, m * x * x / (2.0 * hbar * t))); };
  numerics::AdaptiveOptions o;
  o.tol = {1e-13, 1e-11};
  const auto res = numerics::integrate_adaptive(
      [&](double rp) { return (G(r - rp) - G(r + rp)) * kState.value(rp); }, 0.0, kState.L, o);
  return std::norm(res.value);
}

}  // namespace

TEST(InitialState, Normalized) {
  numerics::AdaptiveOptions o;
  o.tol = {1e-14, 1e-14};
  for (int n : {1, 2, 5}) {
    const InitialState s{n, 1.3};
    const double norm = numerics::integrate_adaptive([&](double r) { return s.value(r) * s.value(r); }, 0.0,
                                                     s.L, o).value;
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_EQ(s.value(1.5), 0.0);
  }
}

TEST(Overlap, ClosedFormMatchesQuadrature) {
  numerics::AdaptiveOptions o;
  o.tol = {1e-14, 1e-13};
  for (int n : {1, 3}) {
    const InitialState s{n, 1.0};
    for (double k : {0.2, 1.7, n * pi - 1e-5, n * pi, n * pi + 2e-4, 9.3}) {
      const double direct = numerics::integrate_adaptive([&](double r) { return std::sin(k * r) * s.value(r); },
                                                         0.0, s.L, o).value;
      EXPECT_NEAR(overlap_integral(s, k), direct, 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Overlap, ZeroMomentumLimits) {
  const PotentialSpec ordinary(5.0, 1.0);
  EXPECT_EQ(overlap(ordinary, kState, 0.0), Complex(0.0));
  const PotentialSpec critical(-1.0, 1.0);
  const double expect = std::sqrt(2.0 / pi) * std::sqrt(2.0) / pi;
  EXPECT_NEAR(overlap(critical, kState, 0.0).real(), expect, 1e-14);
  EXPECT_NEAR(overlap(critical, kState, 1e-6).real(), expect, 1e-6);
}

TEST(Overlap, VelocityDensityScaling) {
  const PotentialSpec s(5.0, 1.0);
  for (double v : {0.1, 3.0, 11.0}) {
    const double k = kUnits.k_from_velocity(v);
    EXPECT_NEAR(velocity_density_at(s, kState, kUnits, v),
                overlap_density(s, kState, k) * kUnits.m / kUnits.hbar, 1e-15);
  }
}

TEST(Completeness, UnitNormWithoutBoundState) {
  for (double alpha : {5.0, -0.5, -0.98, 0.0}) {
    const PotentialSpec s(alpha, 1.0);
    const double K = completeness_cutoff(s, kState);
    EXPECT_NEAR(completeness(s, kState, K), 1.0, 1e-7) << "alpha=" << alpha;
  }
}

TEST(Completeness, DeficitEqualsBoundStateWeight) {
  const PotentialSpec s(-2.0, 1.0);
  const double K = completeness_cutoff(s, kState);
  const double kappa = 0.796812;
  // Bound state u = N sinh(κr) inside, N sinh(κL) e^{-κ(r-L)} outside.
  numerics::AdaptiveOptions o;
  o.tol = {1e-13, 1e-12};
  auto u = [&](double r) { return r < 1.0 ? std::sinh(kappa * r) : std::sinh(kappa) * std::exp(-kappa * (r - 1.0)); };
  const double n2 = numerics::integrate_adaptive([&](double r) { return u(r) * u(r); }, 0.0, 1.0, o).value +
                    std::sinh(kappa) * std::sinh(kappa) / (2.0 * kappa);
  const double proj = numerics::integrate_adaptive([&](double r) { return u(r) * kState.value(r); }, 0.0, 1.0, o).value;
  EXPECT_NEAR(completeness(s, kState, K), 1.0 - proj * proj / n2, 2e-5);
}

TEST(VelocityTable, SmallSpeedCoefficientMatchesClosedForm) {
  const PotentialSpec s(5.0, 1.0);
  const VelocityDensity table = velocity_table(s, kState, kUnits);
  EXPECT_NEAR(table.beta_smallv / winter_beta(kUnits, 5.0, 1.0, 1), 1.0, 1e-4);
  EXPECT_NEAR(table.mass, 1.0, 1e-6);
  EXPECT_FALSE(table.bound_state);
  EXPECT_EQ(table.v.front(), 0.0);
}

TEST(VelocityTable, CriticalHasFiniteZeroSpeedDensity) {
  const PotentialSpec s(-1.0, 1.0);
  const VelocityDensity table = velocity_table(s, kState, kUnits);
  // ρ(0) = |c(0)|² m/ħ = 4/π³ · m/ħ
  EXPECT_NEAR(table.rho_zero, 4.0 / (pi * pi * pi) * kUnits.m / kUnits.hbar, 1e-6);
}

TEST(Psi, InitialStateRecovered) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(psi(s, kState, kUnits, 0.5, 0.0).real(), std::sqrt(2.0), 1e-4);
  EXPECT_NEAR(std::abs(psi(s, kState, kUnits, 2.0, 0.0)), 0.0, 1e-4);
}

TEST(Psi, FreeEvolutionMatchesImageSolution) {
  const PotentialSpec free(0.0, 1.0);
  for (double t : {1.0, 3.0, 10.0}) {
    for (double r : {0.5, 2.0, 6.0}) {
      const double oracle = free_density_images(r, t);
      EXPECT_NEAR(density_quantum(free, kState, kUnits, r, t), oracle, 1e-9 + 1e-6 * oracle)
          << "r=" << r << " t=" << t;
    }
  }
}

TEST(Psi, FreeEvolutionReferenceValues) {
  // Reference values from an independent arbitrary-precision evaluation.
  const PotentialSpec free(0.0, 1.0);
  const std::vector<std::pair<double, double>> ref{
      {1.0, 0.05637}, {3.0, 2.3537e-3}, {5.0, 5.1327e-4}, {8.0, 1.2572e-4}, {10.0, 6.4417e-5}};
  for (const auto& [t, p] : ref) EXPECT_NEAR(density_quantum(free, kState, kUnits, 2.0, t) / p, 1.0, 1e-4);
}

TEST(Psi, NarrowResonanceRegression) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(density_quantum(s, kState, kUnits, 2.0, 1.0) / 7.2245e-2, 1.0, 1e-4);
  EXPECT_NEAR(density_quantum(s, kState, kUnits, 2.0, 3.0) / 1.4373e-3, 1.0, 1e-4);
}

TEST(Psi, TraceIndependentOfThreadCount) {
  const PotentialSpec s(5.0, 1.0);
  const auto times = make_time_grid(0.5, 20.0, 16, true);
  PsiOptions one, three;
  three.threads = 3;
  const auto a = density_trace_quantum(s, kState, kUnits, 2.0, times, one);
  const auto b = density_trace_quantum(s, kState, kUnits, 2.0, times, three);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.provenance, Provenance::quantum_spectral);
}

TEST(Survival, StartsAtOneAndDecays) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(survival_probability(s, kState, kUnits, 0.0), 1.0, 1e-6);
  EXPECT_NEAR(survival_probability(s, kState, kUnits, 2.0) / 0.021133, 1.0, 1e-4);
  // Inside the exponential epoch the decay rate is the pole width.
  const double s3 = survival_probability(s, kState, kUnits, 3.0);
  const double s5 = survival_probability(s, kState, kUnits, 5.0);
  EXPECT_NEAR(std::log(s3 / s5) / 2.0, 1.0 / 0.51819, 0.05);
}

TEST(Psi, RejectsBadArguments) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_THROW(psi(s, kState, kUnits, -1.0, 1.0), DomainError);
  EXPECT_THROW(psi(s, kState, kUnits, 1.0, -1.0), DomainError);
  EXPECT_THROW(psi(s, InitialState{1, 2.0}, kUnits, 1.0, 1.0), DomainError);
}
