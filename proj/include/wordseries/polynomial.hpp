#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wordseries/word.hpp"

namespace wordseries {

inline constexpr std::size_t kMaxPolyVars = 16;

class Monomial {
 public:
  Monomial() = default;

  std::uint8_t operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, unsigned v) {
    if (v > 255) throw Error("monomial exponent too large");
    e_[i] = static_cast<std::uint8_t>(v);
  }
  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e_) d += x;
    return d;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxPolyVars; ++i) r.set(i, unsigned(a.e_[i]) + b.e_[i]);
    return r;
  }
  auto operator<=>(const Monomial&) const = default;

 private:
  std::array<std::uint8_t, kMaxPolyVars> e_{};
};

// Polynomial with complex coefficients in canonical variables laid out as
// (q_0..q_{n-1}, p_0..p_{n-1}).
class Polynomial {
 public:
  using Complex = std::complex<double>;
  using Terms = std::map<Monomial, Complex>;

  explicit Polynomial(std::size_t dof = 1) : dof_(dof) {
    if (dof_ == 0 || 2 * dof_ > kMaxPolyVars) throw Error("unsupported number of degrees of freedom");
  }

  static Polynomial constant(std::size_t dof, Complex c) {
    Polynomial p(dof);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Polynomial variable(std::size_t dof, std::size_t var, Complex c = 1.0) {
    Polynomial p(dof);
    Monomial m;
    m.set(var, 1);
    p.add_term(m, c);
    return p;
  }
  static Polynomial q(std::size_t dof, std::size_t i) { return variable(dof, i); }
  static Polynomial p(std::size_t dof, std::size_t i) { return variable(dof, dof + i); }

  std::size_t dof() const { return dof_; }
  std::size_t nvars() const { return 2 * dof_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.first.degree());
    return d;
  }
  Complex coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void add_term(const Monomial& m, Complex c) {
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    if (s == Complex{}) terms_.clear();
    for (auto& t : terms_) t.second *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same(b);
    Polynomial r(a.dof_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(dof_, 1.0);
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(dof_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d.set(var, m[var] - 1u);
      r.add_term(d, c * double(m[var]));
    }
    return r;
  }

  Polynomial conj() const {
    Polynomial r(dof_);
    for (const auto& [m, c] : terms_) r.add_term(m, std::conj(c));
    return r;
  }

  double max_abs_coefficient() const {
    double v = 0;
    for (const auto& t : terms_) v = std::max(v, std::abs(t.second));
    return v;
  }

  template <class T>
  Complex operator()(std::span<const T> x) const {
    if (x.size() != nvars()) throw Error("evaluation point has wrong dimension");
    Complex s{};
    for (const auto& [m, c] : terms_) {
      Complex v = c;
      for (std::size_t i = 0; i < nvars(); ++i)
        if (m[i]) v *= std::pow(Complex(x[i]), int(m[i]));
      s += v;
    }
    return s;
  }
  Complex operator()(const std::vector<double>& x) const { return (*this)(std::span<const double>(x)); }
  Complex operator()(const std::vector<Complex>& x) const { return (*this)(std::span<const Complex>(x)); }

  // Variable names q0.., p0.. for printing.
  std::string to_string(double drop_below = 0) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (std::abs(c) <= drop_below) continue;
      os << (first ? "" : " + ") << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
      for (std::size_t i = 0; i < nvars(); ++i) {
        if (!m[i]) continue;
        os << '*' << (i < dof_ ? 'q' : 'p') << (i < dof_ ? i : i - dof_);
        if (m[i] > 1) os << '^' << int(m[i]);
      }
      first = false;
    }
    return first ? "0" : os.str();
  }

 private:
  void require_same(const Polynomial& o) const {
    if (dof_ != o.dof_) throw Error("polynomials over different variable sets");
  }

  std::size_t dof_;
  Terms terms_;
};

// {A, B} = sum_j dA/dq_j dB/dp_j - dA/dp_j dB/dq_j.
inline Polynomial poisson_bracket(const Polynomial& a, const Polynomial& b) {
  if (a.dof() != b.dof()) throw Error("poisson bracket of polynomials over different variable sets");
  const std::size_t n = a.dof();
  Polynomial r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r += a.derivative(j) * b.derivative(n + j);
    r -= a.derivative(n + j) * b.derivative(j);
  }
  return r;
}

// Flattened polynomial with cached powers for repeated real evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
    max_exp_.assign(nvars_, 0);
    for (const auto& [m, c] : p.terms()) {
      coeffs_.push_back(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        exps_.push_back(m[i]);
        max_exp_[i] = std::max<unsigned>(max_exp_[i], m[i]);
      }
    }
  }

  std::complex<double> operator()(std::span<const double> x) const {
    thread_local std::vector<double> powers;
    std::size_t stride = 0;
    for (auto e : max_exp_) stride = std::max<std::size_t>(stride, e + 1);
    powers.assign(nvars_ * stride, 1.0);
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned e = 1; e <= max_exp_[i]; ++e) powers[i * stride + e] = powers[i * stride + e - 1] * x[i];
    std::complex<double> s{};
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      double v = 1.0;
      const auto* e = &exps_[t * nvars_];
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) v *= powers[i * stride + e[i]];
      s += coeffs_[t] * v;
    }
    return s;
  }

 private:
  std::size_t nvars_ = 0;
  std::vector<std::complex<double>> coeffs_;
  std::vector<std::uint8_t> exps_;
  std::vector<unsigned> max_exp_;
};

}  // namespace wordseries
