#include "decaylab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v, int line, const std::string& key) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError("expected a finite number, got '" + std::string(v) + "'", line, key);
  return x;
}

std::uint64_t parse_uint(std::string_view v, int line, const std::string& key) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'", line, key);
  return x;
}

bool parse_bool(std::string_view v, int line, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'", line, key);
}

std::string_view to_string(TauMode m) {
  switch (m) {
    case TauMode::pole: return "pole";
    case TauMode::fit: return "fit";
    case TauMode::explicit_value: return "explicit";
  }
  return "pole";
}

using Setter = std::function<void(Scenario&, std::string_view, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, double Scenario::*field) {
      t[key] = [field](Scenario& s, std::string_view v, int line, const std::string& k) {
        s.*field = parse_double(v, line, k);
      };
    };
    t["name"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      if (v.empty()) throw ConfigError("name must not be empty", line, k);
      s.name = std::string(v);
    };
    t["units.hbar"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.units.hbar = parse_double(v, line, k);
    };
    t["units.m"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.units.m = parse_double(v, line, k);
    };
    num("potential.alpha", &Scenario::alpha);
    num("potential.L", &Scenario::L);
    t["state.n"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      const auto n = parse_uint(v, line, k);
      if (n < 1 || n > 1000) throw ConfigError("state.n must be in [1, 1000]", line, k);
      s.n = int(n);
    };
    t["source.tau_mode"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      if (v == "pole") s.tau_mode = TauMode::pole;
      else if (v == "fit") s.tau_mode = TauMode::fit;
      else if (v == "explicit") s.tau_mode = TauMode::explicit_value;
      else throw ConfigError("expected pole, fit or explicit", line, k);
    };
    num("source.tau_value", &Scenario::tau_value);
    t["source.tau_fit_lo"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.tau_fit_window.lo = parse_double(v, line, k);
    };
    t["source.tau_fit_hi"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.tau_fit_window.hi = parse_double(v, line, k);
    };
    num("observation.r", &Scenario::r);
    t["observation.t_min"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.t_min = parse_double(v, line, k);
    };
    t["observation.t_max"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.t_max = parse_double(v, line, k);
    };
    t["observation.t_points"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.t_points = parse_uint(v, line, k);
    };
    t["observation.t_spacing"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      if (v == "log") s.log_spacing = true;
      else if (v == "linear") s.log_spacing = false;
      else throw ConfigError("expected log or linear", line, k);
    };
    t["mc.enabled"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.mc_enabled = parse_bool(v, line, k);
    };
    t["mc.n_particles"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.mc_particles = parse_uint(v, line, k);
    };
    t["mc.seed"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.mc_seed = parse_uint(v, line, k);
    };
    num("mc.bin_width_r", &Scenario::mc_bin_width_r);
    num("mc.bin_width_t", &Scenario::mc_bin_width_t);
    auto window = [&t](const std::string& key, std::optional<Window> Scenario::*field, bool lo) {
      t[key] = [field, lo](Scenario& s, std::string_view v, int line, const std::string& k) {
        Window w = (s.*field).value_or(Window{std::nan(""), std::nan("")});
        (lo ? w.lo : w.hi) = parse_double(v, line, k);
        s.*field = w;
      };
    };
    window("analysis.fit_lo", &Scenario::fit_window, true);
    window("analysis.fit_hi", &Scenario::fit_window, false);
    window("analysis.compare_lo", &Scenario::compare_window, true);
    window("analysis.compare_hi", &Scenario::compare_window, false);
    num("numerics.psi_tol", &Scenario::psi_tol);
    t["output.prefix"] = [](Scenario& s, std::string_view v, int, const std::string&) {
      s.output_prefix = std::string(v);
    };
    t["output.plot"] = [](Scenario& s, std::string_view v, int line, const std::string& k) {
      s.plot_script = parse_bool(v, line, k);
    };
    return t;
  }();
  return table;
}

void check_window(const std::optional<Window>& w, const std::string& key) {
  if (!w) return;
  if (std::isnan(w->lo) || std::isnan(w->hi))
    throw ConfigError("both " + key + "_lo and " + key + "_hi must be given", 0, key);
  if (!(w->lo > 0.0 && w->lo < w->hi)) throw ConfigError("window must satisfy 0 < lo < hi", 0, key);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("format_number: conversion failed");
  return std::string(buf, p);
}

void Scenario::validate() const {
  auto bad = [](const std::string& what, const std::string& field) { throw ConfigError(what, 0, field); };
  if (!(units.hbar > 0.0)) bad("hbar must be positive", "units.hbar");
  if (!(units.m > 0.0)) bad("m must be positive", "units.m");
  if (!(L > 0.0)) bad("L must be positive", "potential.L");
  if (n < 1) bad("n must be >= 1", "state.n");
  if (tau_mode == TauMode::explicit_value && !(tau_value > 0.0))
    bad("tau_mode = explicit requires tau_value > 0", "source.tau_value");
  if (!(tau_fit_window.lo >= 0.0 && tau_fit_window.lo < tau_fit_window.hi))
    bad("tau fit window must satisfy 0 <= lo < hi", "source.tau_fit_lo");
  if (!(r > 0.0)) bad("r must be positive", "observation.r");
  if (t_points < 16) bad("time grid needs at least 16 points", "observation.t_points");
  if (t_min && !(*t_min > 0.0)) bad("t_min must be positive", "observation.t_min");
  if (t_min && t_max && !(*t_min < *t_max)) bad("t_min must be below t_max", "observation.t_max");
  if (mc_particles < 1) bad("n_particles must be >= 1", "mc.n_particles");
  if (!(mc_bin_width_r > 0.0)) bad("bin_width_r must be positive", "mc.bin_width_r");
  if (mc_bin_width_t < 0.0) bad("bin_width_t must be non-negative", "mc.bin_width_t");
  if (!(psi_tol > 0.0)) bad("psi_tol must be positive", "numerics.psi_tol");
  check_window(fit_window, "analysis.fit");
  check_window(compare_window, "analysis.compare");
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::set<std::string> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, std::string(line));
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key", line_no, key);
    if (!seen.insert(key).second) throw ConfigError("duplicate key", line_no, key);
    it->second(s, value, line_no, key);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file " + path.string());
  return parse_scenario(buf.str());
}

std::string write_scenario(const Scenario& s) {
  std::ostringstream o;
  auto kv = [&o](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
  auto num = [&kv](const char* k, double v) { kv(k, format_number(v)); };
  kv("name", s.name);
  num("units.hbar", s.units.hbar);
  num("units.m", s.units.m);
  num("potential.alpha", s.alpha);
  num("potential.L", s.L);
  kv("state.n", std::to_string(s.n));
  kv("source.tau_mode", std::string(to_string(s.tau_mode)));
  num("source.tau_value", s.tau_value);
  num("source.tau_fit_lo", s.tau_fit_window.lo);
  num("source.tau_fit_hi", s.tau_fit_window.hi);
  num("observation.r", s.r);
  if (s.t_min) num("observation.t_min", *s.t_min);
  if (s.t_max) num("observation.t_max", *s.t_max);
  kv("observation.t_points", std::to_string(s.t_points));
  kv("observation.t_spacing", s.log_spacing ? "log" : "linear");
  kv("mc.enabled", s.mc_enabled ? "true" : "false");
  kv("mc.n_particles", std::to_string(s.mc_particles));
  kv("mc.seed", std::to_string(s.mc_seed));
  num("mc.bin_width_r", s.mc_bin_width_r);
  num("mc.bin_width_t", s.mc_bin_width_t);
  if (s.fit_window) {
    num("analysis.fit_lo", s.fit_window->lo);
    num("analysis.fit_hi", s.fit_window->hi);
  }
  if (s.compare_window) {
    num("analysis.compare_lo", s.compare_window->lo);
    num("analysis.compare_hi", s.compare_window->hi);
  }
  num("numerics.psi_tol", s.psi_tol);
  if (!s.output_prefix.empty()) kv("output.prefix", s.output_prefix);
  kv("output.plot", s.plot_script ? "true" : "false");
  return o.str();
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig3", "fig-zero-resonance", "fig-transition"};
}

std::optional<Scenario> builtin_scenario(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  s.L = 1.0;
  s.n = 1;
  s.tau_mode = TauMode::explicit_value;
  if (name == "fig3") {
    s.alpha = 5.0;
    s.tau_value = 0.5;
    s.r = 2.0;
    s.mc_enabled = true;
    s.compare_window = Window{30.0, 300.0};
  } else if (name == "fig-zero-resonance") {
    s.alpha = -1.0;
    s.tau_value = 0.2;
    s.r = 2.0;
    s.fit_window = Window{20.0, 200.0};
  } else if (name == "fig-transition") {
    // The t^-3 regime at r = 10 only sets in after ~1e4; the default
    // 1000τ grid would stop inside the t^-1 plateau.
    s.alpha = -0.98;
    s.tau_value = 0.2;
    s.r = 10.0;
    s.t_min = 0.02;
    s.t_max = 5e4;
  } else {
    return std::nullopt;
  }
  s.validate();
  return s;
}

namespace {

// ln P = c - t/τ on a 16-point linear grid over the window.
std::optional<double> fit_tau(const Scenario& s, const PsiOptions& po) {
  const PotentialSpec spec = s.potential();
  const double lo = std::max(s.tau_fit_window.lo, 1e-3 * s.tau_fit_window.hi);
  const auto times = make_time_grid(lo, s.tau_fit_window.hi, 16, false);
  const DensityTrace tr = density_trace_quantum(spec, s.state(), s.units, s.r, times, po);
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (!(tr.values[i] > 0.0)) return std::nullopt;
    xm += tr.times[i];
    ym += std::log(tr.values[i]);
  }
  xm /= double(tr.size());
  ym /= double(tr.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    sxx += (tr.times[i] - xm) * (tr.times[i] - xm);
    sxy += (tr.times[i] - xm) * (std::log(tr.values[i]) - ym);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) return std::nullopt;
  return -1.0 / slope;
}

std::optional<Window> clip(Window w, const std::vector<double>& t) {
  w.lo = std::max(w.lo, t.front());
  w.hi = std::min(w.hi, t.back());
  if (!(w.lo < w.hi)) return std::nullopt;
  return w;
}

}  // namespace

RunResult run_scenario(const Scenario& s, unsigned threads) {
  s.validate();
  const PotentialSpec spec = s.potential();
  if (spec.has_bound_state())
    throw ConfigError("potential supports a bound state; decay scenarios are refused", 0,
                      "potential.alpha");
  const InitialState state = s.state();
  RunResult out;
  out.scenario = s;
  out.a0 = scattering_length(spec);

  PsiOptions po;
  po.tol = s.psi_tol;
  po.threads = threads;

  try {
    out.pole = resonance_pole(spec, s.units, 1);
  } catch (const Error& e) {
    out.notes.push_back(std::string("no resonance pole: ") + e.what());
  }
  try {
    out.tau_fit = fit_tau(s, po);
    if (!out.tau_fit) out.notes.push_back("tau fit: density not decaying on the fit window");
  } catch (const Error& e) {
    out.notes.push_back(std::string("tau fit failed: ") + e.what());
  }

  switch (s.tau_mode) {
    case TauMode::explicit_value:
      out.tau = s.tau_value;
      out.tau_source = "explicit";
      break;
    case TauMode::pole:
      if (out.pole && std::isfinite(out.pole->tau)) {
        out.tau = out.pole->tau;
        out.tau_source = "pole";
        break;
      }
      out.notes.push_back("tau: falling back from pole to fit");
      [[fallthrough]];
    case TauMode::fit:
      if (!out.tau_fit) throw ConvergenceError("tau: neither pole nor fit available", 0.0, 0.0);
      out.tau = *out.tau_fit;
      out.tau_source = "fit";
      break;
  }

  const double t_min = s.t_min.value_or(0.1 * out.tau);
  const double t_max = s.t_max.value_or(1000.0 * out.tau);
  if (!(t_min < t_max)) throw ConfigError("empty time grid", 0, "observation.t_max");
  out.times = make_time_grid(t_min, t_max, s.t_points, s.log_spacing);

  out.quantum = density_trace_quantum(spec, state, s.units, s.r, out.times, po);

  const VelocityDensity table = velocity_table(spec, state, s.units);
  out.beta = table.beta_smallv;
  out.rho_zero = table.rho_zero;
  out.completeness = completeness(spec, state, s.units.k_from_velocity(table.v.back()));

  const SourceModel unshifted = SourceModel::from_table(out.tau, 0.0, table);
  out.classical_unshifted = classical_trace(unshifted, s.r, out.times, threads);
  std::optional<SourceModel> shifted;
  if (out.a0.divergent) {
    out.notes.push_back("scattering length divergent: no shifted classical source");
  } else if (!(s.r > out.a0.value)) {
    out.notes.push_back("observation point not ahead of the shifted source");
  } else {
    shifted = SourceModel::from_table(out.tau, out.a0.value, table);
    out.classical_shifted = classical_trace(*shifted, s.r, out.times, threads);
  }

  if (s.mc_enabled) {
    McConfig mc;
    mc.n_particles = s.mc_particles;
    mc.seed = s.mc_seed;
    mc.bin_width_r = s.mc_bin_width_r;
    mc.bin_width_t = s.mc_bin_width_t;
    mc.threads = threads;
    out.mc = monte_carlo_trace(shifted ? *shifted : unshifted, mc, s.r, out.times);
  }

  out.law = spec.critical() ? resonant_law(s.units, s.L, s.n)
                            : winter_joint_law(s.units, s.alpha, s.L, s.n, s.r);
  out.tail.resize(out.times.size());
  for (std::size_t i = 0; i < out.times.size(); ++i) out.tail[i] = out.law(out.times[i]);

  try {
    out.slopes = local_slope(out.quantum);
  } catch (const Error& e) {
    out.notes.push_back(std::string("local slope: ") + e.what());
  }
  try {
    out.transition = detect_transition(out.quantum, out.tau);
  } catch (const Error& e) {
    out.notes.push_back(std::string("transition: ") + e.what());
  }

  std::optional<Window> fw;
  if (s.fit_window) fw = clip(*s.fit_window, out.times);
  else if (out.transition) fw = clip({10.0 * out.transition->t_star, 100.0 * out.transition->t_star}, out.times);
  if (!fw) fw = clip({0.1 * t_max, t_max}, out.times);
  try {
    if (fw) out.fit = fit_power_law(out.quantum, *fw);
  } catch (const Error& e) {
    out.notes.push_back(std::string("power-law fit: ") + e.what());
  }

  const std::optional<Window> cw = s.compare_window ? clip(*s.compare_window, out.times) : fw;
  if (cw) {
    try {
      if (out.classical_shifted) out.cmp_shifted = compare_traces(*out.classical_shifted, out.quantum, *cw);
      out.cmp_unshifted = compare_traces(out.classical_unshifted, out.quantum, *cw);
    } catch (const Error& e) {
      out.notes.push_back(std::string("comparison: ") + e.what());
    }
  }
  return out;
}

}  // namespace decaylab
