#pragma once

#include <complex>
#include <vector>

#include "wordseries/algebra.hpp"
#include "wordseries/frequency.hpp"

namespace wordseries {

using CVector = std::vector<Complex>;

inline CVector to_cvector(const std::vector<double>& v, double scale = 1.0) {
  CVector r;
  r.reserve(v.size());
  for (double x : v) r.emplace_back(scale * x);
  return r;
}

// Pair (v, delta): an angle shift plus a word-series coefficient map.
struct ExtCoeff {
  CVector v;
  CoeffMap delta;

  ExtCoeff(CVector v_, CoeffMap delta_) : v(std::move(v_)), delta(std::move(delta_)) {
    if (v.size() != delta.alphabet().dim()) throw Error("vector part dimension must match the alphabet");
  }

  static ExtCoeff unit(AlphabetPtr alphabet, std::size_t max_len) {
    const std::size_t d = alphabet->dim();
    return {CVector(d), CoeffMap::unit(std::move(alphabet), max_len)};
  }

  ExtCoeff& operator+=(const ExtCoeff& o) {
    require_same_dim(o);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += o.v[j];
    delta += o.delta;
    return *this;
  }
  ExtCoeff& operator-=(const ExtCoeff& o) {
    require_same_dim(o);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= o.v[j];
    delta -= o.delta;
    return *this;
  }
  friend ExtCoeff operator+(ExtCoeff a, const ExtCoeff& b) { return a += b; }
  friend ExtCoeff operator-(ExtCoeff a, const ExtCoeff& b) { return a -= b; }

  double vector_norm_inf() const {
    double m = 0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double norm_inf() const { return std::max(vector_norm_inf(), delta.norm_inf()); }

 private:
  void require_same_dim(const ExtCoeff& o) const {
    if (v.size() != o.v.size()) throw Error("extended coefficients of different dimension");
  }
};

namespace detail {
inline Complex dot_letter_sum(const Word& w, const Alphabet& alphabet, const CVector& v) {
  if (v.size() != alphabet.dim()) throw Error("vector dimension does not match alphabet");
  const auto k = letter_sum(w, alphabet);
  Complex s{};
  for (std::size_t j = 0; j < k.size(); ++j)
    if (k[j] != 0) s += static_cast<double>(k[j]) * v[j];
  return s;
}
}  // namespace detail

// Multiplies each coefficient by exp(i (sum k) . v).
inline CoeffMap apply_Xi(const CVector& v, const CoeffMap& d) {
  const Complex i1(0, 1);
  return d.transformed([&](const Word& w, Complex c) {
    if (w.empty()) return c;
    return c * std::exp(i1 * detail::dot_letter_sum(w, d.alphabet(), v));
  });
}

// Multiplies each coefficient by i (sum k) . v; the empty word goes to 0.
inline CoeffMap apply_xi(const CVector& v, const CoeffMap& d) {
  const Complex i1(0, 1);
  return d.transformed([&](const Word& w, Complex c) {
    if (w.empty()) return Complex{};
    return c * i1 * detail::dot_letter_sum(w, d.alphabet(), v);
  });
}

// Frequency-aware variants: resonant words get exactly zero phase.
inline CoeffMap apply_Xi(const FrequencySpec& freq, double t, const CoeffMap& d) {
  const Complex i1(0, 1);
  return d.transformed([&](const Word& w, Complex c) {
    const auto f = word_frequency(w, d.alphabet(), freq);
    return f.is_zero ? c : c * std::exp(i1 * f.mu * t);
  });
}

inline CoeffMap apply_xi(const FrequencySpec& freq, const CoeffMap& d) {
  const Complex i1(0, 1);
  return d.transformed([&](const Word& w, Complex c) {
    const auto f = word_frequency(w, d.alphabet(), freq);
    return f.is_zero ? Complex{} : c * i1 * f.mu;
  });
}

// (u, g) * (v, d) = (g_0 v + d_0 u, g * Xi_u d).
inline ExtCoeff big_star(const ExtCoeff& e1, const ExtCoeff& e2) {
  e1.delta.require_compatible(e2.delta);
  const Complex g0 = e1.delta.empty_coeff();
  const Complex d0 = e2.delta.empty_coeff();
  CVector v(e1.v.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = g0 * e2.v[j] + d0 * e1.v[j];
  return {std::move(v), convolve(e1.delta, apply_Xi(e1.v, e2.delta))};
}

inline ExtCoeff ext_inverse(const ExtCoeff& e) {
  if (std::abs(e.delta.empty_coeff() - 1.0) > 1e-12)
    throw Error("extended inverse needs a group element");
  CVector minus_v(e.v.size());
  for (std::size_t j = 0; j < e.v.size(); ++j) minus_v[j] = -e.v[j];
  return {minus_v, apply_Xi(minus_v, star_inverse(e.delta))};
}

// [(v, d), (u, e)] = (0, xi_v e - xi_u d + d*e - e*d).
inline ExtCoeff ext_bracket(const ExtCoeff& e1, const ExtCoeff& e2) {
  if (std::abs(e1.delta.empty_coeff()) > 1e-12 || std::abs(e2.delta.empty_coeff()) > 1e-12)
    throw Error("extended bracket needs algebra elements");
  CoeffMap d = apply_xi(e1.v, e2.delta) - apply_xi(e2.v, e1.delta) + bracket(e1.delta, e2.delta);
  return {CVector(e1.v.size()), std::move(d)};
}

// m-fold big_star power.
inline ExtCoeff ext_power(const ExtCoeff& e, std::size_t m) {
  ExtCoeff r = ExtCoeff::unit(e.delta.alphabet_ptr(), e.delta.max_len());
  for (std::size_t i = 0; i < m; ++i) r = big_star(r, e);
  return r;
}

}  // namespace wordseries
