#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wordseries/coeffs.hpp"
#include "wordseries/hamiltonian.hpp"

namespace wordseries {

// H = sum over oscillators (p^2 + omega^2 q^2)/2 + U(q), state laid out as
// (q_0..q_{n-1}, p_0..p_{n-1}).
struct MechanicalSystem {
  std::string name;
  Chart chart;
  Polynomial potential;
  std::vector<double> x0;

  MechanicalSystem(std::string name_, Chart chart_, Polynomial potential_, std::vector<double> x0_)
      : name(std::move(name_)), chart(std::move(chart_)), potential(std::move(potential_)), x0(std::move(x0_)) {
    const std::size_t n = chart.dof();
    if (potential.dof() != n) throw Error("potential and chart have different degrees of freedom");
    if (x0.size() != 2 * n) throw Error("initial state has wrong dimension");
    for (const auto& [m, c] : potential.terms())
      for (std::size_t i = 0; i < n; ++i)
        if (m[n + i]) throw Error("potential must depend on positions only");
  }

  std::size_t dof() const { return chart.dof(); }
  Polynomial harmonic() const { return harmonic_hamiltonian(chart); }
  Polynomial hamiltonian() const { return harmonic() + potential; }
  ModeDecomposition modes() const { return fourier_modes(potential, chart); }
};

namespace presets {

// H = p^2/2 + omega^2 q^2/2 - q F, started at (q, p) = (0, 1).
inline MechanicalSystem forced_oscillator(double omega, double force) {
  Chart chart = Chart::oscillators(FrequencySpec({omega}));
  return {"forced_oscillator", std::move(chart), Polynomial::q(1, 0) * Complex(-force), {0.0, 1.0}};
}

// Single oscillator with U = eps (q^3/3 + q^4/4).
inline MechanicalSystem cubic_quartic(double omega, double eps) {
  Chart chart = Chart::oscillators(FrequencySpec({omega}));
  const auto q = Polynomial::q(1, 0);
  Polynomial u = (q.pow(3) * (1.0 / 3.0) + q.pow(4) * 0.25) * Complex(eps);
  return {"cubic_quartic", std::move(chart), std::move(u), {0.5, 0.2}};
}

inline FrequencySpec fpu5_frequencies() {
  ExactBasis basis{{"1", "sqrt2"}, {1.0, std::numbers::sqrt2}, {{1, 0}, {70, 0}, {70, 0}, {0, 70}, {140, 0}}};
  return FrequencySpec::from_exact(std::move(basis));
}

// U = (q1 q2)^2/8 + (1/20 + q2 + q3 + q4 + 5 q5/2)^4 with frequencies
// (1, 70, 70, 70 sqrt2, 140).
inline MechanicalSystem fpu5() {
  Chart chart = Chart::oscillators(fpu5_frequencies());
  const std::size_t n = 5;
  auto q = [&](std::size_t i) { return Polynomial::q(n, i); };
  Polynomial u = (q(0) * q(1)).pow(2) * 0.125;
  Polynomial lin = Polynomial::constant(n, 0.05) + q(1) + q(2) + q(3) + q(4) * 2.5;
  u += lin.pow(4);
  const auto& w = chart.freq.omega();
  std::vector<double> x0{1.0,
                         3.0 / (10.0 * w[1]),
                         4.0 / (5.0 * w[1]),
                         -11.0 * std::numbers::sqrt2 / (10.0 * w[3]),
                         7.0 / (10.0 * w[1]),
                         -0.2,
                         0.6,
                         0.7,
                         -0.9,
                         0.8};
  return {"fpu5", std::move(chart), std::move(u), std::move(x0)};
}

}  // namespace presets

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t step) : Error(what + " at step " + std::to_string(step)), step(step) {}
  std::size_t step;
};

// Exact sub-flows of the splitting: harmonic rotation and potential kick.
class SplittingIntegrator {
 public:
  SplittingIntegrator(const MechanicalSystem& sys, SplittingScheme scheme)
      : chart_(sys.chart), scheme_(std::move(scheme)) {
    const std::size_t n = sys.dof();
    for (std::size_t i = 0; i < n; ++i) gradient_.emplace_back(sys.potential.derivative(i));
  }

  const SplittingScheme& scheme() const { return scheme_; }

  void rotate(std::vector<double>& x, double t) const {
    const std::size_t n = chart_.dof();
    for (std::size_t i = 0; i < n; ++i) {
      if (chart_.oscillator[i] < 0) continue;
      const double w = chart_.omega_of(i);
      const double c = std::cos(w * t), s = std::sin(w * t);
      const double q = x[i], p = x[n + i];
      x[i] = c * q + s * p / w;
      x[n + i] = c * p - s * w * q;
    }
  }

  void kick(std::vector<double>& x, double t) const {
    const std::size_t n = chart_.dof();
    const std::span<const double> xs(x);
    thread_local std::vector<double> g;
    g.resize(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = gradient_[i](xs).real();
    for (std::size_t i = 0; i < n; ++i) x[n + i] -= t * g[i];
  }

  void step(std::vector<double>& x, double h) const {
    const auto& a = scheme_.a();
    const auto& b = scheme_.b();
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] != 0) rotate(x, a[j] * h);
      if (b[j] != 0) kick(x, b[j] * h);
    }
  }

 private:
  Chart chart_;
  SplittingScheme scheme_;
  std::vector<CompiledPolynomial> gradient_;
};

using Observable = std::function<double(std::span<const double>)>;
struct NamedObservable {
  std::string name;
  Observable f;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> observables;  // [observable][sample]
  double last_step = 0;                           // size of a final partial step, 0 if none

  const std::vector<double>& final_state() const { return states.back(); }
};

inline Observable polynomial_observable(const Polynomial& p) {
  auto c = std::make_shared<CompiledPolynomial>(p);
  return [c](std::span<const double> x) { return (*c)(x).real(); };
}

// n_steps steps of size h; every `stride`-th state is recorded.
inline TrajectoryRecord integrate_splitting(const MechanicalSystem& sys, const SplittingScheme& scheme, double h,
                                            std::size_t n_steps, const std::vector<NamedObservable>& observables = {},
                                            std::size_t stride = 1, double last_step = 0) {
  if (h == 0) throw Error("step size must be nonzero");
  if (stride == 0) stride = 1;
  const SplittingIntegrator integ(sys, scheme);
  TrajectoryRecord rec;
  for (const auto& o : observables) rec.observable_names.push_back(o.name);
  rec.observables.resize(observables.size());
  std::vector<double> x = sys.x0;
  auto record = [&](double t) {
    rec.times.push_back(t);
    rec.states.push_back(x);
    for (std::size_t i = 0; i < observables.size(); ++i) rec.observables[i].push_back(observables[i].f(x));
  };
  record(0.0);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    integ.step(x, h);
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }))
      throw SimulationError("non-finite state with h = " + std::to_string(h), s);
    if (s % stride == 0 || s == n_steps) record(double(s) * h);
  }
  if (last_step != 0) {
    integ.step(x, last_step);
    rec.last_step = last_step;
    record(double(n_steps) * h + last_step);
  }
  return rec;
}

// Final state after integrating to t_end in n steps of the given scheme.
inline std::vector<double> integrate_to(const MechanicalSystem& sys, const SplittingScheme& scheme, double t_end,
                                        std::size_t n) {
  const SplittingIntegrator integ(sys, scheme);
  std::vector<double> x = sys.x0;
  const double h = t_end / double(n);
  for (std::size_t s = 0; s < n; ++s) integ.step(x, h);
  return x;
}

struct ReferenceSolution {
  std::vector<double> state;
  std::size_t steps = 0;
  double self_difference = 0;  // max-norm gap between the last two refinement levels
};

// Order-8 composition, doubling the step count until two levels agree.
inline ReferenceSolution reference_trajectory(const MechanicalSystem& sys, double t_end, double tol,
                                              std::size_t initial_steps = 64, std::size_t max_steps = 1u << 22) {
  const SplittingScheme s8 = SplittingScheme::composition8();
  std::size_t n = std::max<std::size_t>(1, initial_steps);
  std::vector<double> prev = integrate_to(sys, s8, t_end, n);
  while (2 * n <= max_steps) {
    n *= 2;
    std::vector<double> cur = integrate_to(sys, s8, t_end, n);
    double diff = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
    if (diff <= tol) return {std::move(cur), n, diff};
    prev = std::move(cur);
  }
  throw Error("reference solution did not reach tolerance " + std::to_string(tol));
}

struct ScanRow {
  double h = 0;
  std::size_t steps = 0;
  double last_step = 0;
  double energy_error = 0;
  double nearest_resonance = 0;  // 0 when no resonance was supplied
  double resonance_distance = 0;  // |h - h_res| / h_res
};

// Whole steps plus, if T/h is not integral, one final partial step.
inline std::pair<std::size_t, double> step_plan(double T, double h) {
  const double ratio = T / h;
  const double whole = std::round(ratio);
  if (std::abs(ratio - whole) <= 1e-9 * std::max(1.0, ratio)) return {std::size_t(whole), 0.0};
  const double n = std::floor(ratio);
  return {std::size_t(n), T - n * h};
}

inline std::vector<ScanRow> energy_error_scan(const MechanicalSystem& sys, const SplittingScheme& scheme,
                                              const std::vector<double>& h_grid, double T,
                                              const std::vector<double>& resonances = {}) {
  const SplittingIntegrator integ(sys, scheme);
  const CompiledPolynomial energy(sys.hamiltonian());
  const double e0 = energy(sys.x0).real();
  std::vector<ScanRow> rows;
  rows.reserve(h_grid.size());
  for (double h : h_grid) {
    const auto [n, last] = step_plan(T, h);
    std::vector<double> x = sys.x0;
    for (std::size_t s = 0; s < n; ++s) integ.step(x, h);
    if (last != 0) integ.step(x, last);
    ScanRow r{h, n, last, std::abs(energy(x).real() - e0), 0, 0};
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) r.energy_error = INFINITY;
    double best = INFINITY;
    for (double hr : resonances) {
      const double d = std::abs(h - hr) / hr;
      if (d < best) {
        best = d;
        r.nearest_resonance = hr;
        r.resonance_distance = d;
      }
    }
    rows.push_back(r);
  }
  return rows;
}

// Log-spaced base grid plus `per_resonance` points spread over +-width
// (relative) around each resonance; sorted, duplicates removed.
inline std::vector<double> build_scan_grid(double h_min, double h_max, std::size_t points,
                                           const std::vector<double>& resonances = {},
                                           std::size_t per_resonance = 0, double width = 0.015) {
  if (!(h_min > 0) || !(h_max > h_min) || points < 2) throw Error("scan grid needs 0 < h_min < h_max and >= 2 points");
  std::vector<double> g;
  const double l0 = std::log(h_min), l1 = std::log(h_max);
  for (std::size_t i = 0; i < points; ++i) g.push_back(std::exp(l0 + (l1 - l0) * double(i) / double(points - 1)));
  g.front() = h_min;
  g.back() = h_max;
  if (per_resonance >= 2) {
    for (double hr : resonances) {
      for (std::size_t i = 0; i < per_resonance; ++i) {
        const double h = hr * (1.0 - width + 2.0 * width * double(i) / double(per_resonance - 1));
        if (h >= h_min && h <= h_max) g.push_back(h);
      }
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * b; }), g.end());
  return g;
}

// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// True if some scanned h* with |h* - h_res| <= within * h_res has the largest
// error among all scanned h with |h - h*| <= radius * h_res. Rows sorted by h.
inline bool has_local_maximum_near(const std::vector<ScanRow>& rows, double h_res, double within = 0.01,
                                   double radius = 0.01) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].h - h_res) > within * h_res) continue;
    bool peak = true;
    for (std::size_t j = 0; j < rows.size() && peak; ++j)
      if (std::abs(rows[j].h - rows[i].h) <= radius * h_res && rows[j].energy_error > rows[i].energy_error) peak = false;
    if (peak) return true;
  }
  return false;
}

// Time series of observable(x_n) - observable(x_0).
inline TrajectoryRecord observable_drift(const MechanicalSystem& sys, const SplittingScheme& scheme, double h, double T,
                                         const std::vector<NamedObservable>& observables, std::size_t stride = 1) {
  const auto [n, last] = step_plan(T, h);
  TrajectoryRecord rec = integrate_splitting(sys, scheme, h, n, observables, stride, last);
  for (auto& series : rec.observables) {
    const double v0 = series.front();
    for (auto& v : series) v -= v0;
  }
  return rec;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Truncated sum of delta_w f_w(x) over words of length <= N, followed by the
// harmonic rotation by the (real) vector part.
inline std::vector<Complex> word_series_evaluate(const ExtCoeff& e, const ModeDecomposition& modes,
                                                 std::span<const double> x, std::size_t N) {
  if (!(e.delta.alphabet() == *modes.alphabet())) throw Error("coefficients and modes use different alphabets");
  const WordBasis basis(modes);
  std::vector<Complex> y(x.size());
  for (const auto& [w, c] : e.delta.entries()) {
    if (w.size() > N) continue;
    if (w.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
      continue;
    }
    const auto f = basis(w, x);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * f[i];
  }
  bool shift = false;
  std::vector<double> theta(e.v.size());
  for (std::size_t j = 0; j < e.v.size(); ++j) {
    if (std::abs(e.v[j].imag()) > 1e-14 * std::max(1.0, std::abs(e.v[j])))
      throw Error("angle shift must be real to act in (q, p)");
    theta[j] = e.v[j].real();
    shift = shift || theta[j] != 0;
  }
  if (!shift) return y;
  std::vector<double> re(y.size()), im(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
  }
  re = harmonic_rotation(modes.chart(), re, theta);
  im = harmonic_rotation(modes.chart(), im, theta);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = {re[i], im[i]};
  return y;
}

inline std::vector<Complex> word_series_evaluate(const CoeffMap& d, const ModeDecomposition& modes,
                                                 std::span<const double> x, std::size_t N) {
  return word_series_evaluate(ExtCoeff(CVector(d.alphabet().dim()), d), modes, x, N);
}

enum class AngleDirection { to_action_angle, from_action_angle };

// Per oscillator pair: P = sqrt(2 w a) cos(theta), Q = sqrt(2 a / w) sin(theta).
// States are (Q.., P..) one way and (theta.., a..) the other; slow pairs pass through.
inline std::vector<double> action_angle_transform(std::span<const double> state, const Chart& chart,
                                                  AngleDirection dir) {
  const std::size_t n = chart.dof();
  if (state.size() != 2 * n) throw Error("state has wrong dimension");
  std::vector<double> out(state.begin(), state.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (chart.oscillator[i] < 0) continue;
    const double w = chart.omega_of(i);
    if (dir == AngleDirection::to_action_angle) {
      const double q = state[i], p = state[n + i];
      const double a = (p * p + w * w * q * q) / (2 * w);
      if (!(a > 0)) throw Error("action-angle variables undefined at zero action");
      out[i] = std::atan2(w * q, p);
      out[n + i] = a;
    } else {
      const double th = state[i], a = state[n + i];
      if (a < 0) throw Error("negative action");
      out[i] = std::sqrt(2 * a / w) * std::sin(th);
      out[n + i] = std::sqrt(2 * w * a) * std::cos(th);
    }
  }
  return out;
}

}  // namespace wordseries
