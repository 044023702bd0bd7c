#pragma once

#include <complex>
#include <span>
#include <vector>

namespace decaylab {

using Complex = std::complex<double>;

/// ħ and m. All kinematic conversions go through here.
struct PhysicalUnits {
  double hbar = 1.0;
  double m = 0.5;

  void validate() const;

  double energy(double k) const { return hbar * hbar * k * k / (2.0 * m); }
  double k_from_energy(double E) const;
  double velocity(double k) const { return hbar * k / m; }
  double k_from_velocity(double v) const { return m * v / hbar; }
  /// Coefficient of k² in the time phase: e^{-i k² t · hbar/(2m)}.
  double phase_rate() const { return hbar / (2.0 * m); }
};

/// Half-line delta barrier at r = L with reduced strength α = 2mV₀/ħ².
struct PotentialSpec {
  double alpha = 0.0;
  double L = 1.0;

  PotentialSpec() = default;
  PotentialSpec(double alpha_, double L_);

  double coupling() const { return 1.0 + alpha * L; }  // f(0)
  bool critical() const;                               // |1 + αL| < 1e-12
  bool has_bound_state() const { return !critical() && alpha * L < -1.0; }
};

struct JostData {
  double k = 0.0;
  Complex f{};
  double delta = 0.0;
  Complex S{};
};

/// f(k) = 1 + α(e^{2ikL} - 1)/(2ik); f(0) = 1 + αL.
Complex jost(const PotentialSpec& spec, Complex k);

/// δ(k) = -arg f(k) on the branch continuous from k → 0⁺, where
/// δ(0⁺) = 0 (no bound state), π (one bound state) or π/2 (critical).
double phase_shift(const PotentialSpec& spec, double k);

/// δ on an ascending grid, unwrapped point to point.
std::vector<double> phase_shift(const PotentialSpec& spec, std::span<const double> k_grid);

/// conj(f)/f for real k > 0.
Complex s_matrix(const PotentialSpec& spec, double k);

JostData jost_data(const PotentialSpec& spec, double k);

/// k cot δ from the real and imaginary parts of f. Used by the fit.
double k_cot_delta(const PotentialSpec& spec, double k);

struct ScatteringLength {
  double value = 0.0;
  bool divergent = false;
};

/// αL²/(1+αL); divergent at the critical coupling.
ScatteringLength scattering_length(const PotentialSpec& spec);

enum class EreBasis { quadratic, quartic };

struct EffectiveRange {
  double a0 = 0.0;
  double r0 = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  double fit_residual = 0.0;   // rms of k cot δ residuals
  double condition = 1.0;      // of the normal matrix
  EreBasis basis = EreBasis::quartic;
};

/// Uniform grid over kL ∈ [0.01, 0.3].
std::vector<double> default_ere_grid(const PotentialSpec& spec, std::size_t points = 30);

/// Least squares of k cot δ against {1, k², [k⁴]}: a0 = -1/c₀, r0 = 2c₁.
EffectiveRange effective_range_fit(const PotentialSpec& spec, std::span<const double> k_grid,
                                   EreBasis basis = EreBasis::quartic);

/// k-normalized continuum state with the e^{-iδ} phase convention, which
/// makes it real: √(2/π) sin(kr)/|f| inside, √(2/π) sin(kr+δ) outside.
Complex wk_value(const PotentialSpec& spec, double k, double r);

struct ResonancePole {
  Complex k_pole{};
  Complex E_pole{};
  double gamma = 0.0;
  double tau = 0.0;  // ħ/Γ; infinite for a bound state
  bool bound_state = false;
  double residual = 0.0;
};

/// Zero of f seeded at nπ/L. If the potential binds, the bound state is
/// returned instead (flagged), since that is the pole that dominates.
ResonancePole resonance_pole(const PotentialSpec& spec, const PhysicalUnits& units, int n_guess);

}  // namespace decaylab
