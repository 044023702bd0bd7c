#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace decaylab {

enum class Provenance { quantum_spectral, quantum_grid, classical_exact, classical_mc, analytic_tail };

std::string_view to_string(Provenance p);

/// P(r, t) at fixed r on a strictly increasing time grid.
struct DensityTrace {
  double r = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  Provenance provenance = Provenance::quantum_spectral;
  // Optional per-sample standard error (Monte Carlo) and empty-bin flags.
  std::vector<double> std_errors;
  std::vector<bool> empty;

  /// Throws DomainError on negative/non-finite values, unsorted times or
  /// mismatched lengths.
  void validate() const;
  std::size_t size() const { return times.size(); }
};

/// Strictly increasing grid: log or linear spacing, both ends included.
std::vector<double> make_time_grid(double t_min, double t_max, std::size_t points, bool log_spaced);

}  // namespace decaylab
