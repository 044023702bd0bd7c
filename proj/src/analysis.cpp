#include "decaylab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(const DensityTrace& tr, std::size_t i) {
  if (!(tr.values[i] > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive density " << tr.values[i] << " at t = " << tr.times[i];
    throw DomainError(msg.str());
  }
}

}  // namespace

double AsymptoticLaw::operator()(double t) const { return amplitude * std::pow(t, exponent); }

double quantum_tail(double beta, double a0, double r, double t) {
  if (!(t > 0.0)) throw DomainError("quantum_tail: t must be positive");
  return beta * (r - a0) * (r - a0) / (t * t * t);
}

double classical_tail(double beta, double r, double t) { return quantum_tail(beta, 0.0, r, t); }

double winter_beta(const PhysicalUnits& units, double alpha, double L, int n) {
  units.validate();
  const double c = 1.0 + alpha * L;
  const double m3 = units.m * units.m * units.m;
  const double h3 = units.hbar * units.hbar * units.hbar;
  return 4.0 * m3 * L * L * L / (c * c * n * n * kPi * kPi * kPi * h3);
}

double winter_joint_tail(const PhysicalUnits& units, double alpha, double L, int n, double r, double t) {
  units.validate();
  if (!(t > 0.0)) throw DomainError("winter_joint_tail: t must be positive");
  const double c = 1.0 + alpha * L;
  const double s = L * units.m / (kPi * units.hbar);
  const double d = r - alpha * L * L / c;
  return 4.0 / (n * n * c * c) * s * s * s * d * d / (t * t * t);
}

double resonant_tail(const PhysicalUnits& units, double L, int n, double t) {
  units.validate();
  if (!(t > 0.0)) throw DomainError("resonant_tail: t must be positive");
  return 4.0 * L * units.m / (units.hbar * n * n * kPi * kPi * kPi * t);
}

AsymptoticLaw winter_joint_law(const PhysicalUnits& units, double alpha, double L, int n, double r) {
  const PotentialSpec spec(alpha, L);
  const ScatteringLength a0 = scattering_length(spec);
  if (a0.divergent) throw DomainError("winter_joint_law: critical coupling has no t^-3 law");
  AsymptoticLaw law;
  law.form = TailForm::winter_joint;
  law.exponent = -3.0;
  law.shift_a0 = a0.value;
  law.amplitude = winter_beta(units, alpha, L, n) * (r - a0.value) * (r - a0.value);
  return law;
}

AsymptoticLaw resonant_law(const PhysicalUnits& units, double L, int n) {
  AsymptoticLaw law;
  law.form = TailForm::resonant;
  law.exponent = -1.0;
  law.amplitude = resonant_tail(units, L, n, 1.0);
  return law;
}

PowerLawFit fit_power_law(const DensityTrace& tr, Window w) {
  if (!(w.lo < w.hi)) throw DomainError("fit_power_law: empty window");
  double sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] < w.lo || tr.times[i] > w.hi) continue;
    require_positive(tr, i);
    xs.push_back(std::log(tr.times[i]));
    ys.push_back(std::log(tr.values[i]));
  }
  const std::size_t n = xs.size();
  if (n < 8) throw DomainError("fit_power_law: fewer than 8 samples in the window");
  // Centre the regressor for accuracy.
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= double(n);
  ym /= double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - xm, dy = ys[i] - ym;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  PowerLawFit fit;
  fit.window = w;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += e * e;
  }
  fit.stderr_slope = std::sqrt(rss / double(n - 2) / sxx);
  return fit;
}

std::vector<double> local_slope(const DensityTrace& tr) {
  const std::size_t n = tr.size();
  if (n < 2) throw DomainError("local_slope: need at least 2 samples");
  std::vector<double> lx(n), ly(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_positive(tr, i);
    if (!(tr.times[i] > 0.0)) throw DomainError("local_slope: times must be positive");
    lx[i] = std::log(tr.times[i]);
    ly[i] = std::log(tr.values[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    out[i] = (ly[b] - ly[a]) / (lx[b] - lx[a]);
  }
  return out;
}

TransitionResult detect_transition(const DensityTrace& tr, double tau) {
  if (!(tau > 0.0)) throw DomainError("detect_transition: tau must be positive");
  const std::size_t n = tr.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = tr.values[i] > 0.0 ? std::log(tr.values[i]) + tr.times[i] / tau
                              : -std::numeric_limits<double>::infinity();
  }

  const double ln2 = std::log(2.0);
  TransitionResult res;
  std::size_t epoch_end = 0;
  bool found = false;
  for (std::size_t i = 0; i < n && !found; ++i) {
    double lo = y[i], hi = y[i], sum = 0.0;
    for (std::size_t j = i; j < n; ++j) {
      sum += y[j];
      lo = std::min(lo, y[j]);
      hi = std::max(hi, y[j]);
      const double c = sum / double(j - i + 1);
      if (!(hi - c <= ln2 && c - lo <= ln2)) break;
      if (tr.times[j] - tr.times[i] >= 6.0 * tau && j - i + 1 >= 8) {
        res.offset = c;
        res.epoch = {tr.times[i], tr.times[j]};
        epoch_end = j;
        found = true;
        break;
      }
    }
  }
  if (!found) throw DomainError("detect_transition: no exponential epoch in the trace");

  // Interference makes P cross the exponential line once per beat, so a
  // return only counts if it stays within the band for 2τ or longer.
  std::vector<bool> inside(n);
  for (std::size_t i = 0; i < n; ++i) inside[i] = std::abs(y[i] - res.offset) <= ln2;
  std::size_t last_return = epoch_end;
  for (std::size_t i = epoch_end + 1; i < n; ++i) {
    if (!inside[i]) continue;
    const std::size_t a = i;
    while (i + 1 < n && inside[i + 1]) ++i;
    if (tr.times[i] - tr.times[a] >= 2.0 * tau) last_return = i;
  }
  std::size_t first_out = last_return + 1;
  while (first_out < n && inside[first_out]) ++first_out;
  if (first_out >= n) throw DomainError("detect_transition: no persistent departure from the exponential law");
  const std::size_t p = first_out - 1;
  const double d0 = std::abs(y[p] - res.offset) - ln2;
  const double d1 = std::abs(y[first_out] - res.offset) - ln2;
  const double t0 = tr.times[p], t1 = tr.times[first_out];
  res.t_star = std::isfinite(d1) && d1 != d0 ? t0 + (t1 - t0) * (-d0) / (d1 - d0) : t1;
  return res;
}

TraceComparison compare_traces(const DensityTrace& a, const DensityTrace& b, Window w,
                               double mismatch_threshold) {
  std::vector<std::size_t> ia, ib;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.times[i] >= w.lo && a.times[i] <= w.hi) ia.push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.times[i] >= w.lo && b.times[i] <= w.hi) ib.push_back(i);
  if (ia.size() != ib.size() || ia.empty()) throw DomainError("compare_traces: time grids differ on the window");
  TraceComparison out;
  out.points = ia.size();
  double sum_dev = 0.0, sum_ratio = 0.0;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    const double ta = a.times[ia[k]], tb = b.times[ib[k]];
    if (std::abs(ta - tb) > 1e-12 * std::max(std::abs(ta), std::abs(tb)))
      throw DomainError("compare_traces: time grids differ on the window");
    const double va = a.values[ia[k]], vb = b.values[ib[k]];
    const double m = std::max(va, vb);
    const double dev = m > 0.0 ? std::abs(va - vb) / m : 0.0;
    out.max_rel_dev = std::max(out.max_rel_dev, dev);
    sum_dev += dev;
    sum_ratio += vb > 0.0 ? va / vb : (va > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  }
  out.mean_rel_dev = sum_dev / double(out.points);
  out.mean_ratio = sum_ratio / double(out.points);
  out.mismatch = out.max_rel_dev > mismatch_threshold;
  return out;
}

}  // namespace decaylab
