// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/classical.hpp"
#include "decaylab/grid_oracle.hpp"
#include "decaylab/numerics/quadrature.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/quantum.hpp"
#include "decaylab/scattering.hpp"
#include "decaylab/scenario.hpp"

using namespace decaylab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void guarded(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(id, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main() {
  const unsigned threads = default_thread_count();
  const PhysicalUnits units;
  const InitialState state{1, 1.0};

  const Scenario fig3 = *builtin_scenario("fig3");
  RunResult r3;
  double fig3_seconds = 0.0;
  bool have_fig3 = false;
  try {
    const auto t0 = Clock::now();
    r3 = run_scenario(fig3, threads);
    fig3_seconds = seconds_since(t0);
    have_fig3 = true;
  } catch (const std::exception& e) {
    std::printf("fig3 run failed: %s\n", e.what());
  }

  // 1. Tail law at r = 2.
  guarded(1, [&] {
    if (!have_fig3) throw std::runtime_error("fig3 run unavailable");
    double worst = 0.0;
    for (std::size_t i = 0; i < r3.times.size(); ++i) {
      const double t = r3.times[i];
      if (t < 50.0 || t > 500.0) continue;
      worst = std::max(worst, std::abs(r3.quantum.values[i] * t * t * t / 6.10e-4 - 1.0));
    }
    const auto fit = fit_power_law(r3.quantum, {50.0, 500.0});
    const bool ok = worst < 0.05 && std::abs(fit.slope + 3.0) <= 0.05 && fig3_seconds < 120.0;
    verdict(1, ok, fmt("max |P t^3/6.10e-4 - 1| = %.4f on [50,500], slope %.4f, fig3 run %.1f s", worst, fit.slope,
                       fig3_seconds));
  });

  // 2. Shifted and unshifted classical sources.
  guarded(2, [&] {
    if (!have_fig3) throw std::runtime_error("fig3 run unavailable");
    const auto sh = compare_traces(*r3.classical_shifted, r3.quantum, {30.0, 300.0});
    const auto un = compare_traces(r3.classical_unshifted, r3.quantum, {30.0, 300.0});
    const double a0 = r3.a0.value;
    const double ratio = std::pow(fig3.r / (fig3.r - a0), 2);
    const bool ok = sh.max_rel_dev < 0.1 && std::abs(un.mean_ratio - 2.94) <= 0.15 && un.mismatch;
    verdict(2, ok, fmt("shifted max dev %.4f; unshifted mean ratio %.4f (analytic %.4f)", sh.max_rel_dev,
                       un.mean_ratio, ratio));
  });

  // 3. Zero-energy resonance.
  guarded(3, [&] {
    const auto r = run_scenario(*builtin_scenario("fig-zero-resonance"), threads);
    const auto fit = fit_power_law(r.quantum, {20.0, 200.0});
    const double amp = std::exp(fit.intercept);
    const double target = 2.0 / std::pow(std::numbers::pi, 3);
    const bool ok = std::abs(fit.slope + 1.0) <= 0.05 && std::abs(amp / target - 1.0) <= 0.05;
    verdict(3, ok, fmt("slope %.4f, amplitude %.6f (2/pi^3 = %.6f)", fit.slope, amp, target));
  });

  // 4. Near-critical crossover.
  guarded(4, [&] {
    const auto r = run_scenario(*builtin_scenario("fig-transition"), threads);
    const auto& t = r.times;
    const auto& s = r.slopes;
    // Longest contiguous run with |slope + 1| <= 0.15.
    double best_lo = 0, best_hi = 0, best_decades = 0;
    std::size_t best_end = 0;
    for (std::size_t i = 0; i < s.size();) {
      if (std::abs(s[i] + 1.0) > 0.15) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < s.size() && std::abs(s[j + 1] + 1.0) <= 0.15) ++j;
      const double dec = std::log10(t[j] / t[i]);
      if (dec > best_decades) {
        best_decades = dec;
        best_lo = t[i];
        best_hi = t[j];
        best_end = j;
      }
      i = j + 1;
    }
    const bool later = best_end + 1 < s.size();
    const bool ok = best_decades >= 0.5 && later && s.back() <= -2.5;
    verdict(4, ok, fmt("slope -1 +- 0.15 on [%.3g, %.3g] (%.2f decades)", best_lo, best_hi, best_decades) +
                       fmt("; slope %.3f at t_max = %.3g", s.back(), t.back()));
  });

  // 5. Transition onset.
  guarded(5, [&] {
    if (!have_fig3) throw std::runtime_error("fig3 run unavailable");
    const auto tr = detect_transition(r3.quantum, r3.tau);
    const bool ok = tr.t_star >= 4.0 && tr.t_star <= 6.0;
    std::string extra;
    if (r3.pole) extra = fmt(" (with pole tau %.4f: %.3f)", r3.pole->tau, detect_transition(r3.quantum, r3.pole->tau).t_star);
    verdict(5, ok, fmt("t_star = %.3f with tau = %.3g", tr.t_star, r3.tau) + extra);
  });

  // 6. Exponential epoch vs pole lifetime.
  guarded(6, [&] {
    if (!have_fig3 || !r3.pole || !r3.tau_fit) throw std::runtime_error("pole or fit unavailable");
    const double rel = std::abs(*r3.tau_fit / r3.pole->tau - 1.0);
    verdict(6, rel <= 0.15, fmt("tau_fit %.4f on [1,4], pole tau %.4f, rel diff %.4f", *r3.tau_fit, r3.pole->tau, rel));
  });

  // 7. Spectral vs Crank-Nicolson grid.
  guarded(7, [&] {
    const PotentialSpec spec(5.0, 1.0);
    const std::vector<double> times{3.0, 10.0};
    const auto grid = grid_oracle(spec, state, units, 2.0, times);
    const double d3 = std::abs(grid.trace.values[0] / density_quantum(spec, state, units, 2.0, 3.0) - 1.0);
    const double d10 = std::abs(grid.trace.values[1] / density_quantum(spec, state, units, 2.0, 10.0) - 1.0);
    verdict(7, d3 < 0.02 && d10 < 0.05, fmt("rel dev %.4f at t=3, %.4f at t=10", d3, d10));
  });

  // 8. Method identities.
  guarded(8, [&] {
    const PotentialSpec spec(5.0, 1.0);
    const auto table = velocity_table(spec, state, units);
    const SourceModel src = SourceModel::from_table(0.5, scattering_length(spec).value, table);

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(1.0, 6.0), ul(std::log(0.3), std::log(300.0));
    double worst_eq = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double r = ur(rng), t = std::exp(ul(rng));
      const double a = classical_density(src, r, t), b = classical_density_velocity(src, r, t);
      worst_eq = std::max(worst_eq, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }

    // Points inside the exponential epoch, where a 0.02-wide bin collects
    // enough of the 10^6 particles for a meaningful standard error.
    McConfig mc;
    mc.n_particles = 1'000'000;
    mc.seed = 1;
    mc.threads = threads;
    double worst_sigma = 0.0;
    int points = 0;
    for (const auto& [r, ts] : std::vector<std::pair<double, std::vector<double>>>{
             {2.0, {0.5, 1.0, 1.5, 2.0, 2.5}}, {4.0, {0.5, 1.0, 1.5, 2.0, 2.5}}}) {
      const auto tr = monte_carlo_trace(src, mc, r, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const double h = 0.5 * mc.bin_width_r;
        const double exact = numerics::integrate_adaptive([&](double x) { return classical_density(src, x, ts[i]); },
                                                          r - h, r + h).value / mc.bin_width_r;
        const double se = tr.std_errors[i];
        worst_sigma = std::max(worst_sigma, se > 0.0 ? std::abs(tr.values[i] - exact) / se
                                                     : std::numeric_limits<double>::infinity());
        ++points;
      }
    }

    double worst_norm = 0.0;
    for (double alpha : {5.0, -0.5, -0.98}) {
      const PotentialSpec s(alpha, 1.0);
      worst_norm = std::max(worst_norm, std::abs(completeness(s, state, completeness_cutoff(s, state)) - 1.0));
    }
    const bool ok = worst_eq < 1e-8 && worst_sigma < 3.0 && points == 10 && worst_norm < 1e-4;
    verdict(8, ok, fmt("t0 vs velocity forms max rel %.2e; MC max |dev|/se %.2f over 10 points; max |norm-1| %.2e", worst_eq,
                       worst_sigma, worst_norm));
  });

  // 9. Analytic cross-checks.
  guarded(9, [&] {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_id = 0.0;
    for (int i = 0; i < 100; ++i) {
      const PhysicalUnits u{0.5 + 1.5 * u01(rng), 0.2 + 2.8 * u01(rng)};
      const double L = 0.5 + 1.5 * u01(rng);
      double aL = -0.99 + 9.0 * u01(rng);
      if (std::abs(1.0 + aL) < 1e-3) aL += 0.01;
      const double alpha = aL / L;
      const int n = 1 + int(4 * u01(rng));
      const double a0 = scattering_length(PotentialSpec(alpha, L)).value;
      const double r = a0 + 0.1 + 20.0 * u01(rng);
      const double t = std::exp(std::log(1.0) + std::log(1e5) * u01(rng));
      const double lhs = winter_joint_tail(u, alpha, L, n, r, t);
      const double rhs = winter_beta(u, alpha, L, n) * (r - a0) * (r - a0) / (t * t * t);
      worst_id = std::max(worst_id, std::abs(lhs / rhs - 1.0));
    }
    double worst_a0 = 0.0;
    for (double alpha : {5.0, 2.0, 0.5, -0.5, -0.9, -3.0}) {
      const PotentialSpec s(alpha, 1.0);
      const auto fit = effective_range_fit(s, default_ere_grid(s));
      worst_a0 = std::max(worst_a0, std::abs(fit.a0 - scattering_length(s).value) / s.L);
    }
    verdict(9, worst_id < 1e-13 && worst_a0 < 1e-4,
            fmt("identity max rel %.2e over 100 draws; fitted a0 max err %.2e L over 6 couplings", worst_id, worst_a0));
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
