#include "decaylab/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "decaylab/errors.hpp"
#include "decaylab/numerics/derivative.hpp"

namespace decaylab::numerics {
namespace {

// Gauss-Kronrod 10/21 (QUADPACK qk21). Gauss nodes are the odd entries.
constexpr std::array<double, 11> kXgk21 = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk21 = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452266, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg10 = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// Gauss-Kronrod 7/15 (QUADPACK qk15). Center node is also a Gauss node.
constexpr std::array<double, 8> kXgk15 = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk15 = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg7 = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double magnitude(double v) { return std::abs(v); }
double magnitude(const Complex& v) { return std::abs(v); }
bool finite(double v) { return std::isfinite(v); }
bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

template <class T, class F>
T checked(const F& f, double x) {
  const T v = f(x);
  if (!finite(v)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw IntegrandError(msg.str(), x);
  }
  return v;
}

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk21(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = checked<T>(f, c);
  T kronrod = fc * kWgk21[10];
  T gauss{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = h * kXgk21[j];
    const T pair = checked<T>(f, c - dx) + checked<T>(f, c + dx);
    kronrod += pair * kWgk21[j];
    if (j % 2 == 1) gauss += pair * kWg10[j / 2];
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

template <class T, class F>
Segment<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = checked<T>(f, c);
  T kronrod = fc * kWgk15[7];
  T gauss = fc * kWg7[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk15[j];
    const T pair = checked<T>(f, c - dx) + checked<T>(f, c + dx);
    kronrod += pair * kWgk15[j];
    if (j % 2 == 1) gauss += pair * kWg7[j / 2];
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

template <class T, class F>
QuadratureResult<T> adaptive(const F& f_in, double a, double b, const AdaptiveOptions& opts) {
  if (!(opts.tol.abs >= 0.0 && opts.tol.rel >= 0.0) || (opts.tol.abs == 0.0 && opts.tol.rel == 0.0)) {
    throw DomainError("integrate_adaptive: tolerance must be positive");
  }
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate_adaptive: NaN limit");
  if (a == b) return {T{}, 0.0, 1};

  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  const bool infinite = std::isinf(b);
  if (std::isinf(a)) throw DomainError("integrate_adaptive: lower limit must be finite");

  // x = a + u/(1-u) maps u in [0,1) onto [a, ∞).
  std::function<T(double)> f;
  double lo = a, hi = b;
  if (infinite) {
    f = [&f_in, a](double u) -> T {
      if (u >= 1.0) return T{};
      const double one_minus = 1.0 - u;
      const double x = a + u / one_minus;
      const T v = f_in(x);
      return v / (one_minus * one_minus);
    };
    lo = 0.0;
    hi = 1.0;
  } else {
    f = [&f_in](double x) -> T { return f_in(x); };
  }

  std::vector<double> cuts{lo};
  if (!infinite) {
    for (double p : opts.breakpoints) {
      if (p > lo && p < hi) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  cuts.push_back(hi);

  std::priority_queue<Segment<T>> heap;
  T total{};
  double total_error = 0.0;
  std::size_t evals = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto s = gk21<T>(f, cuts[i], cuts[i + 1]);
    evals += 21;
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }

  std::size_t intervals = heap.size();
  while (total_error > opts.tol.target(magnitude(total))) {
    if (intervals >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "integrate_adaptive: no convergence after " << intervals
          << " intervals (estimate " << magnitude(total) << ", error " << total_error << ")";
      throw ConvergenceError(msg.str(), Complex(total) * sign, total_error);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("integrate_adaptive: interval cannot be bisected further",
                             Complex(total) * sign, total_error);
    }
    heap.pop();
    auto left = gk21<T>(f, worst.a, mid);
    auto right = gk21<T>(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum to shed the drift of the incremental updates.
  T sum{};
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum * sign, err, evals};
}

}  // namespace

namespace detail {

QuadratureResult<double> adaptive_real(const RealFunction& f, double a, double b,
                                       const AdaptiveOptions& opts) {
  return adaptive<double>(f, a, b, opts);
}

QuadratureResult<Complex> adaptive_complex(const ComplexFunction& f, double a, double b,
                                           const AdaptiveOptions& opts) {
  return adaptive<Complex>(f, a, b, opts);
}

}  // namespace detail

Phase Phase::polynomial(double quadratic, double linear) {
  return {[quadratic, linear](double k) { return (quadratic * k + linear) * k; },
          [quadratic, linear](double k) { return 2.0 * quadratic * k + linear; }};
}

TailEstimate oscillatory_tail(const ComplexFunction& g, const Phase& phase, double kmax,
                              const OscillatoryOptions& opts) {
  if (opts.tail == TailMode::none) return {};

  const Complex g0 = g(kmax);
  if (!finite(g0)) throw IntegrandError("envelope is not finite at kmax", kmax);

  const double C = opts.envelope_bound;
  const double p = opts.decay_power;
  if (std::isfinite(C) && std::abs(g0) > C * std::pow(kmax, -p) * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "envelope |g(" << kmax << ")| = " << std::abs(g0) << " exceeds the declared bound "
        << C * std::pow(kmax, -p);
    throw TailBoundError(msg.str(), Complex{}, std::abs(g0));
  }

  const double omega = opts.envelope_frequency;
  const double rate = phase.rate(kmax);
  if (std::abs(rate) > 4.0 * omega && std::abs(rate) > 0.0) {
    // Integration by parts with s = -iφ':  ∫_K^∞ g e^{-iφ} = -e^{-iφ(K)} (h0 - h1 + h2) + R,
    // h0 = g/s, h_{j+1} = h_j'/s.
    const double scale = omega > 0.0 ? 0.1 / omega : 0.1 * kmax;
    const double step = std::min(scale, 0.1 * kmax);
    const Complex g1 = numeric_derivative(g, kmax, 1, step);
    const Complex g2 = numeric_derivative(g, kmax, 2, step);
    const double r1 = numeric_derivative(phase.rate, kmax, 1, step);
    const double r2 = numeric_derivative(phase.rate, kmax, 2, step);
    const Complex I(0.0, 1.0);
    const Complex s = -I * rate;
    const Complex s1 = -I * r1;
    const Complex s2 = -I * r2;
    const Complex h0 = g0 / s;
    const Complex h1 = (g1 * s - g0 * s1) / (s * s * s);
    const Complex h2 = ((g2 * s - g0 * s2) * s - 3.0 * s1 * (g1 * s - g0 * s1)) / std::pow(s, 5);
    const Complex e = std::exp(-I * phase.value(kmax));
    return {-e * (h0 - h1 + h2), std::abs(h2), true};
  }

  if (!std::isfinite(C) || !(p > 1.0)) {
    throw TailBoundError("tail beyond kmax is neither oscillatory nor bounded by a declared majorant",
                         Complex{}, std::numeric_limits<double>::infinity());
  }
  return {Complex{}, C * std::pow(kmax, 1.0 - p) / (p - 1.0), false};
}

QuadratureResult<Complex> integrate_oscillatory(const ComplexFunction& g, const Phase& phase,
                                                double a, double kmax,
                                                const OscillatoryOptions& opts) {
  if (!(kmax > a)) throw DomainError("integrate_oscillatory: need kmax > a");
  if (!(opts.tol > 0.0)) throw DomainError("integrate_oscillatory: tolerance must be positive");
  if (!(opts.panel_fraction > 0.0 && opts.panel_fraction <= 0.25)) {
    throw DomainError("integrate_oscillatory: panel_fraction must lie in (0, 1/4]");
  }

  const TailEstimate tail = oscillatory_tail(g, phase, kmax, opts);
  if (tail.error > 0.5 * opts.tol) {
    std::ostringstream msg;
    msg << "truncated tail beyond kmax = " << kmax << " is " << tail.error
        << ", above half the tolerance " << opts.tol;
    throw TailBoundError(msg.str(), tail.correction, tail.error);
  }

  const Complex I(0.0, 1.0);
  auto integrand = [&](double k) { return g(k) * std::exp(-I * phase.value(k)); };

  const double span = kmax - a;
  const double panel_budget = 0.5 * opts.tol;
  const double omega = opts.envelope_frequency;
  const double two_pi = 2.0 * std::numbers::pi;
  auto width_at = [&](double k) {
    const double local = std::abs(phase.rate(k)) + omega;
    const double w = local > 0.0 ? opts.panel_fraction * two_pi / local : span;
    return std::min(w, span / 8.0);
  };

  Complex total{};
  double error = 0.0;
  std::size_t evals = 0;
  std::size_t panels = 0;
  // (a, b, depth). Bisection stops a few levels below the base panel: a
  // quarter-period panel is already resolved, and deeper splitting only
  // chases rounding noise in the phase.
  constexpr int kMaxDepth = 4;
  struct Piece {
    double a, b;
    int depth;
  };
  std::vector<Piece> stack;

  double left = a;
  while (left < kmax) {
    double h = width_at(left);
    h = std::min(h, width_at(left + h));
    double right = std::min(kmax, left + h);
    if (kmax - right < 1e-3 * h) right = kmax;

    stack.push_back({left, right, 0});
    while (!stack.empty()) {
      const auto [pa, pb, depth] = stack.back();
      stack.pop_back();
      if (++panels > opts.max_panels) {
        throw ConvergenceError("integrate_oscillatory: panel budget exhausted", total + tail.correction,
                               error + tail.error);
      }
      const auto seg = gk15<Complex>(integrand, pa, pb);
      evals += 15;
      const double share = panel_budget * (pb - pa) / span;
      const double mid = 0.5 * (pa + pb);
      if (seg.error > share && depth < kMaxDepth && mid > pa && mid < pb) {
        stack.push_back({mid, pb, depth + 1});
        stack.push_back({pa, mid, depth + 1});
        continue;
      }
      total += seg.value;
      error += seg.error;
    }
    left = right;
  }

  if (error + tail.error > opts.tol) {
    std::ostringstream msg;
    msg << "integrate_oscillatory: error estimate " << error + tail.error << " above tolerance "
        << opts.tol;
    throw ConvergenceError(msg.str(), total + tail.correction, error + tail.error);
  }
  return {total + tail.correction, error + tail.error, evals};
}

}  // namespace decaylab::numerics
