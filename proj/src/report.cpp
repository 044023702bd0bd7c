#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "decaylab/errors.hpp"
#include "decaylab/scenario.hpp"

namespace decaylab {

namespace {

std::string num(double x) { return format_number(x); }

std::string window_text(Window w) { return "[" + num(w.lo) + ", " + num(w.hi) + "]"; }

std::string_view form_name(TailForm f) {
  switch (f) {
    case TailForm::quantum_tail: return "quantum";
    case TailForm::classical_tail: return "classical";
    case TailForm::winter_joint: return "joint t^-3";
    case TailForm::resonant: return "resonant t^-1";
  }
  return "";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + p.string());
}

void comparison_lines(std::ostringstream& o, const char* label, const TraceComparison& c) {
  o << label << ".max_rel_dev: " << num(c.max_rel_dev) << '\n';
  o << label << ".mean_rel_dev: " << num(c.mean_rel_dev) << '\n';
  o << label << ".mean_ratio: " << num(c.mean_ratio) << '\n';
  o << label << ".mismatch: " << (c.mismatch ? "true" : "false") << '\n';
}

}  // namespace

std::string format_report(const RunResult& r) {
  const Scenario& s = r.scenario;
  std::ostringstream o;
  o << "scenario: " << s.name << '\n';
  o << "alpha: " << num(s.alpha) << "\nL: " << num(s.L) << "\nn: " << s.n << "\nr: " << num(s.r) << '\n';
  o << "tau: " << num(r.tau) << " (" << r.tau_source << ")\n";
  if (r.pole) {
    o << "pole.k: " << num(r.pole->k_pole.real()) << " " << num(r.pole->k_pole.imag()) << "i\n";
    o << "pole.tau: " << num(r.pole->tau) << '\n';
  }
  if (r.tau_fit) o << "fit.tau: " << num(*r.tau_fit) << " on " << window_text(s.tau_fit_window) << '\n';
  if (r.a0.divergent) o << "a0: divergent\n";
  else o << "a0: " << num(r.a0.value) << '\n';
  o << "beta_smallv: " << num(r.beta) << '\n';
  o << "rho_zero: " << num(r.rho_zero) << '\n';
  o << "completeness: " << num(r.completeness) << '\n';
  o << "tail.form: " << form_name(r.law.form) << '\n';
  o << "tail.amplitude: " << num(r.law.amplitude) << '\n';
  o << "tail.exponent: " << num(r.law.exponent) << '\n';
  if (r.transition) {
    o << "transition.t_star: " << num(r.transition->t_star) << '\n';
    o << "transition.epoch: " << window_text(r.transition->epoch) << '\n';
  }
  if (r.fit) {
    o << "powerlaw.window: " << window_text(r.fit->window) << '\n';
    o << "powerlaw.slope: " << num(r.fit->slope) << " +- " << num(r.fit->stderr_slope) << '\n';
    o << "powerlaw.amplitude: " << num(std::exp(r.fit->intercept)) << '\n';
  }
  if (r.cmp_shifted) comparison_lines(o, "classical_shifted_vs_quantum", *r.cmp_shifted);
  if (r.cmp_unshifted) comparison_lines(o, "classical_unshifted_vs_quantum", *r.cmp_unshifted);
  if (r.mc) {
    std::size_t empty = 0;
    for (bool e : r.mc->empty) empty += e;
    o << "mc.particles: " << s.mc_particles << "\nmc.seed: " << s.mc_seed << "\nmc.empty_bins: " << empty << '\n';
  }
  for (const auto& note : r.notes) o << "note: " << note << '\n';
  return o.str();
}

EmittedFiles emit_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string prefix = r.scenario.output_prefix.empty() ? r.scenario.name : r.scenario.output_prefix;

  EmittedFiles f;
  f.csv = dir / (prefix + ".csv");
  f.slope_csv = dir / (prefix + "_slope.csv");
  f.report = dir / (prefix + "_report.txt");
  f.config = dir / (prefix + ".cfg");

  auto cell = [](const std::optional<DensityTrace>& tr, std::size_t i) {
    return tr ? num(tr->values[i]) : std::string();
  };
  std::ostringstream csv;
  csv << "t,P_q,P_c_shifted,P_c_unshifted,P_mc,tail_analytic\r\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv << num(r.times[i]) << ',' << num(r.quantum.values[i]) << ',' << cell(r.classical_shifted, i) << ','
        << num(r.classical_unshifted.values[i]) << ',' << cell(r.mc, i) << ',' << num(r.tail[i]) << "\r\n";
  }
  write_file(f.csv, csv.str());

  std::ostringstream sl;
  sl << "t,slope_q\r\n";
  for (std::size_t i = 0; i < r.slopes.size(); ++i) sl << num(r.times[i]) << ',' << num(r.slopes[i]) << "\r\n";
  write_file(f.slope_csv, sl.str());

  write_file(f.report, format_report(r));
  write_file(f.config, write_scenario(r.scenario));

  if (r.scenario.plot_script) {
    f.plot = dir / (prefix + ".gp");
    std::ostringstream gp;
    gp << "# gnuplot script for " << prefix << ".csv\n"
       << "set datafile separator ','\n"
       << "set logscale xy\n"
       << "set format y '%.0e'\n"
       << "set xlabel 't'\n"
       << "set ylabel 'P(r,t)'\n"
       << "set key bottom left\n"
       << "set terminal pngcairo size 900,650\n"
       << "set output '" << prefix << ".png'\n"
       << "plot '" << prefix << ".csv' every ::1 using 1:2 with lines title 'quantum', \\\n"
       << "     '' every ::1 using 1:3 with lines title 'classical (shifted)', \\\n"
       << "     '' every ::1 using 1:4 with lines title 'classical (unshifted)', \\\n"
       << "     '' every ::1 using 1:5 with points pt 7 ps 0.4 title 'Monte Carlo', \\\n"
       << "     '' every ::1 using 1:6 with lines dt 2 title 'tail law'\n";
    write_file(f.plot, gp.str());
  }
  return f;
}

ScatteringReport run_scattering_report(const Scenario& s) {
  s.validate();
  ScatteringReport rep;
  rep.spec = s.potential();
  rep.bound_state = rep.spec.has_bound_state();

  // kL from 0.05 to 5π, 100 samples.
  std::vector<double> ks(100);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double x = 0.05 + (5.0 * std::numbers::pi - 0.05) * double(i) / double(ks.size() - 1);
    ks[i] = x / s.L;
  }
  const std::vector<double> deltas = phase_shift(rep.spec, ks);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    JostData d;
    d.k = ks[i];
    d.f = jost(rep.spec, ks[i]);
    d.delta = deltas[i];
    d.S = s_matrix(rep.spec, ks[i]);
    rep.table.push_back(d);
  }

  rep.a0 = scattering_length(rep.spec);
  if (!rep.a0.divergent) {
    try {
      rep.fitted = effective_range_fit(rep.spec, default_ere_grid(rep.spec));
    } catch (const Error& e) {
      rep.notes.push_back(std::string("effective-range fit: ") + e.what());
    }
  }

  if (rep.bound_state) {
    rep.poles.push_back(resonance_pole(rep.spec, s.units, 1));
    rep.notes.push_back("bound state present: decay scenarios are refused");
  } else if (rep.spec.alpha != 0.0) {
    for (int n = 1; n <= 3; ++n) {
      try {
        rep.poles.push_back(resonance_pole(rep.spec, s.units, n));
      } catch (const Error& e) {
        rep.notes.push_back("pole n=" + std::to_string(n) + ": " + e.what());
      }
    }
  }
  return rep;
}

std::string format_scattering_report(const ScatteringReport& r) {
  std::ostringstream o;
  o << "alpha: " << num(r.spec.alpha) << "\nL: " << num(r.spec.L) << '\n';
  if (r.a0.divergent) o << "a0.analytic: divergent\n";
  else o << "a0.analytic: " << num(r.a0.value) << '\n';
  if (r.fitted) {
    o << "a0.fitted: " << num(r.fitted->a0) << '\n';
    o << "r0.fitted: " << num(r.fitted->r0) << '\n';
  }
  o << "bound_state: " << (r.bound_state ? "true" : "false") << '\n';
  for (const auto& p : r.poles) {
    o << (p.bound_state ? "bound_state.k: " : "pole.k: ") << num(p.k_pole.real()) << " " << num(p.k_pole.imag())
      << "i";
    if (!p.bound_state) o << "  tau: " << num(p.tau);
    o << '\n';
  }
  for (const auto& n : r.notes) o << "note: " << n << '\n';
  o << "\nk,Re_f,Im_f,delta,Re_S,Im_S\n";
  for (const auto& d : r.table) {
    o << num(d.k) << ',' << num(d.f.real()) << ',' << num(d.f.imag()) << ',' << num(d.delta) << ','
      << num(d.S.real()) << ',' << num(d.S.imag()) << '\n';
  }
  return o.str();
}

}  // namespace decaylab
