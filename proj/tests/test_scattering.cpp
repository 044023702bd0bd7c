#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "decaylab/errors.hpp"
#include "decaylab/scattering.hpp"

using namespace decaylab;
using std::numbers::pi;

namespace {

// tan(kL + δ) from the derivative jump u'(L+) - u'(L-) = α u(L) with u = sin(kr) inside.
double matched_tan(double alpha, double L, double k) {
  return k / (k / std::tan(k * L) + alpha);
}

}  // namespace

TEST(Units, Conversions) {
  const PhysicalUnits u;
  EXPECT_DOUBLE_EQ(u.energy(3.0), 9.0);
  EXPECT_DOUBLE_EQ(u.velocity(3.0), 6.0);
  EXPECT_DOUBLE_EQ(u.k_from_velocity(6.0), 3.0);
  EXPECT_DOUBLE_EQ(u.k_from_energy(9.0), 3.0);
  EXPECT_DOUBLE_EQ(u.phase_rate(), 1.0);
  EXPECT_THROW(PhysicalUnits({0.0, 1.0}).validate(), DomainError);
}

TEST(Potential, Classification) {
  EXPECT_TRUE(PotentialSpec(-1.0, 1.0).critical());
  EXPECT_FALSE(PotentialSpec(-1.0, 1.0).has_bound_state());
  EXPECT_TRUE(PotentialSpec(-2.0, 1.0).has_bound_state());
  EXPECT_FALSE(PotentialSpec(-0.98, 1.0).has_bound_state());
  EXPECT_THROW(PotentialSpec(1.0, 0.0), DomainError);
}

TEST(Jost, ZeroEnergyAndFreeLimit) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(std::abs(jost(s, Complex(0.0)) - 6.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(jost(s, Complex(1e-9)) - 6.0), 0.0, 1e-8);
  const PotentialSpec free(0.0, 1.0);
  EXPECT_EQ(jost(free, Complex(2.3, -0.4)), Complex(1.0));
  EXPECT_NEAR(phase_shift(free, 1.3), 0.0, 1e-15);
}

TEST(Jost, PhaseShiftMatchesBoundaryCondition) {
  for (double alpha : {5.0, 0.7, -0.5, -2.0}) {
    const PotentialSpec s(alpha, 1.0);
    for (double k : {0.3, 1.1, 2.9, 4.4, 7.0}) {
      const double d = phase_shift(s, k);
      EXPECT_NEAR(std::tan(k + d), matched_tan(alpha, 1.0, k), 1e-9 * (1.0 + std::abs(std::tan(k + d))))
          << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(Jost, SmallKPhaseShift) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(phase_shift(s, 0.01), -0.00833333, 5e-8);
}

TEST(Jost, BranchAtThreshold) {
  EXPECT_NEAR(phase_shift(PotentialSpec(-2.0, 1.0), 1e-4), pi, 1e-3);
  EXPECT_NEAR(phase_shift(PotentialSpec(-1.0, 1.0), 1e-4), pi / 2, 1e-3);
  EXPECT_NEAR(phase_shift(PotentialSpec(3.0, 1.0), 1e-4), 0.0, 1e-3);
}

TEST(Jost, SMatrixIsRatio) {
  const PotentialSpec s(5.0, 1.0);
  for (double k : {0.5, 2.7, 9.0}) {
    const Complex S = s_matrix(s, k);
    const Complex ratio = jost(s, Complex(-k)) / jost(s, Complex(k));
    EXPECT_NEAR(std::abs(S - ratio), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(S - std::exp(Complex(0.0, 2.0 * phase_shift(s, k)))), 0.0, 1e-12);
  }
}

TEST(ScatteringLength, ClosedForm) {
  EXPECT_NEAR(scattering_length(PotentialSpec(5.0, 1.0)).value, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(scattering_length(PotentialSpec(-0.98, 1.0)).value, -49.0, 1e-9);
  EXPECT_EQ(scattering_length(PotentialSpec(0.0, 1.0)).value, 0.0);
  EXPECT_TRUE(scattering_length(PotentialSpec(-1.0, 1.0)).divergent);
}

TEST(ScatteringLength, KCotDeltaLimit) {
  const PotentialSpec s(5.0, 1.0);
  EXPECT_NEAR(k_cot_delta(s, 1e-4), -1.0 / (5.0 / 6.0), 1e-6);
}

TEST(EffectiveRange, FitRecoversScatteringLength) {
  for (double alpha : {5.0, 2.0, 0.5, -0.5, -0.9, -3.0}) {
    const PotentialSpec s(alpha, 1.0);
    const auto fit = effective_range_fit(s, default_ere_grid(s));
    EXPECT_NEAR(fit.a0, scattering_length(s).value, 1e-4) << "alpha=" << alpha;
    EXPECT_LT(fit.condition, 1e12);
  }
}

TEST(EffectiveRange, QuadraticBasisIsAvailable) {
  const PotentialSpec s(5.0, 1.0);
  const auto fit = effective_range_fit(s, default_ere_grid(s), EreBasis::quadratic);
  EXPECT_EQ(fit.basis, EreBasis::quadratic);
  EXPECT_NEAR(fit.a0, 5.0 / 6.0, 1e-3);
}

TEST(EffectiveRange, CriticalThrows) {
  const PotentialSpec s(-1.0, 1.0);
  EXPECT_THROW(effective_range_fit(s, default_ere_grid(s)), NodeError);
}

TEST(ContinuumState, InsideOutsideForms) {
  const PotentialSpec s(5.0, 1.0);
  const double k = 2.2;
  const Complex f = jost(s, Complex(k));
  const double d = -std::arg(f);
  for (double r : {0.2, 0.9}) {
    EXPECT_NEAR(wk_value(s, k, r).real(), std::sqrt(2.0 / pi) * std::sin(k * r) / std::abs(f), 1e-14);
  }
  for (double r : {1.3, 7.5}) {
    EXPECT_NEAR(wk_value(s, k, r).real(), std::sqrt(2.0 / pi) * std::sin(k * r + d), 1e-13);
  }
  EXPECT_NEAR(wk_value(s, k, 1.0 - 1e-12).real(), wk_value(s, k, 1.0 + 1e-12).real(), 1e-10);
}

TEST(Poles, NarrowResonance) {
  const PotentialSpec s(5.0, 1.0);
  const auto p = resonance_pole(s, PhysicalUnits{}, 1);
  EXPECT_NEAR(p.k_pole.real(), 2.710382, 2e-6);
  EXPECT_NEAR(p.k_pole.imag(), -0.177999, 2e-6);
  EXPECT_NEAR(p.tau, 0.51819, 1e-5);
  EXPECT_FALSE(p.bound_state);
  EXPECT_LT(std::abs(jost(s, p.k_pole)), 1e-10);
}

TEST(Poles, BoundState) {
  const auto p = resonance_pole(PotentialSpec(-2.0, 1.0), PhysicalUnits{}, 1);
  EXPECT_TRUE(p.bound_state);
  EXPECT_NEAR(p.k_pole.imag(), 0.79681, 1e-5);
  EXPECT_TRUE(std::isinf(p.tau));
  // κ = -(α/2)(1 - e^{-2κL})
  const double kappa = p.k_pole.imag();
  EXPECT_NEAR(kappa, 1.0 - std::exp(-2.0 * kappa), 1e-12);
}

TEST(Poles, FreeParticleHasNone) {
  EXPECT_THROW(resonance_pole(PotentialSpec(0.0, 1.0), PhysicalUnits{}, 1), ConvergenceError);
}
