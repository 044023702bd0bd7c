#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/classical.hpp"
#include "decaylab/quantum.hpp"
#include "decaylab/scattering.hpp"
#include "decaylab/trace.hpp"

namespace decaylab {

enum class TauMode { pole, fit, explicit_value };

struct Scenario {
  std::string name = "custom";
  PhysicalUnits units;
  double alpha = 5.0;
  double L = 1.0;
  int n = 1;

  TauMode tau_mode = TauMode::pole;
  double tau_value = 0.0;  // used when tau_mode is explicit
  Window tau_fit_window{1.0, 4.0};

  double r = 2.0;
  // Unset grid bounds default to 0.1τ .. 1000τ.
  std::optional<double> t_min, t_max;
  std::size_t t_points = 200;
  bool log_spacing = true;

  bool mc_enabled = false;
  std::size_t mc_particles = 1'000'000;
  std::uint64_t mc_seed = 1;
  double mc_bin_width_r = 0.02;
  double mc_bin_width_t = 0.0;

  // Unset windows default to [10 t*, 100 t*] (power law) and the same for the
  // classical comparison.
  std::optional<Window> fit_window;
  std::optional<Window> compare_window;

  double psi_tol = 1e-10;

  std::string output_prefix;  // empty: use name
  bool plot_script = true;

  PotentialSpec potential() const { return PotentialSpec(alpha, L); }
  InitialState state() const { return InitialState{n, L}; }
  /// Throws ConfigError for invalid combinations.
  void validate() const;
};

/// Flat `key = value` text; '#' starts a comment. Throws ConfigError with the
/// offending line and key.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
/// Effective configuration; parse_scenario(write_scenario(s)) reproduces s.
std::string write_scenario(const Scenario& s);

std::vector<std::string> builtin_scenario_names();
std::optional<Scenario> builtin_scenario(std::string_view name);

/// Shortest round-trip decimal form.
std::string format_number(double x);

struct RunResult {
  Scenario scenario;
  std::vector<double> times;
  double tau = 0.0;
  std::string tau_source;
  std::optional<ResonancePole> pole;
  std::optional<double> tau_fit;
  ScatteringLength a0;
  double beta = 0.0;
  double rho_zero = 0.0;
  double completeness = 0.0;

  DensityTrace quantum;
  std::optional<DensityTrace> classical_shifted;
  DensityTrace classical_unshifted;
  std::optional<DensityTrace> mc;
  AsymptoticLaw law;
  std::vector<double> tail;
  std::vector<double> slopes;

  std::optional<TransitionResult> transition;
  std::optional<PowerLawFit> fit;
  std::optional<TraceComparison> cmp_shifted;
  std::optional<TraceComparison> cmp_unshifted;
  std::vector<std::string> notes;
};

/// Full pipeline. Throws ConfigError if the potential binds (decay scenarios
/// are refused) and numerical errors from the layers below.
RunResult run_scenario(const Scenario& s, unsigned threads = 1);

std::string format_report(const RunResult& r);

struct EmittedFiles {
  std::filesystem::path csv, slope_csv, report, config, plot;
};

/// Writes <prefix>.csv, <prefix>_slope.csv, <prefix>_report.txt,
/// <prefix>.cfg and optionally <prefix>.gp into dir. Throws IoError.
EmittedFiles emit_outputs(const RunResult& r, const std::filesystem::path& dir);

struct ScatteringReport {
  PotentialSpec spec;
  std::vector<JostData> table;
  ScatteringLength a0;
  std::optional<EffectiveRange> fitted;
  std::vector<ResonancePole> poles;
  bool bound_state = false;
  std::vector<std::string> notes;
};

ScatteringReport run_scattering_report(const Scenario& s);
std::string format_scattering_report(const ScatteringReport& r);

}  // namespace decaylab
