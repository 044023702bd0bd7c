#include "decaylab/trace.hpp"

#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::quantum_spectral: return "quantum-spectral";
    case Provenance::quantum_grid: return "quantum-grid";
    case Provenance::classical_exact: return "classical-exact";
    case Provenance::classical_mc: return "classical-mc";
    case Provenance::analytic_tail: return "analytic-tail";
  }
  return "unknown";
}

void DensityTrace::validate() const {
  if (times.size() != values.size()) throw DomainError("trace: times and values differ in length");
  if (!std_errors.empty() && std_errors.size() != times.size())
    throw DomainError("trace: std_errors length mismatch");
  if (!empty.empty() && empty.size() != times.size()) throw DomainError("trace: flag length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("trace: times not strictly increasing");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw DomainError("trace: value at t = " + std::to_string(times[i]) + " is negative or not finite");
  }
}

std::vector<double> make_time_grid(double t_min, double t_max, std::size_t points, bool log_spaced) {
  if (points < 2) throw DomainError("time grid: need at least 2 points");
  if (!(t_max > t_min)) throw DomainError("time grid: t_max must exceed t_min");
  if (log_spaced && !(t_min > 0.0)) throw DomainError("time grid: log spacing needs t_min > 0");
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = double(i) / double(points - 1);
    t[i] = log_spaced ? std::exp(std::log(t_min) + u * (std::log(t_max) - std::log(t_min)))
                      : t_min + u * (t_max - t_min);
  }
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

}  // namespace decaylab
