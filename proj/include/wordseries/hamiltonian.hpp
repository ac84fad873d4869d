#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "wordseries/extended.hpp"
#include "wordseries/polynomial.hpp"

namespace wordseries {

// Which canonical pairs are harmonic oscillators, and with which frequency.
struct Chart {
  FrequencySpec freq;
  std::vector<int> oscillator;  // per degree of freedom: index into freq, or -1 if slow

  std::size_t dof() const { return oscillator.size(); }
  double omega_of(std::size_t i) const { return oscillator[i] < 0 ? 0.0 : freq[std::size_t(oscillator[i])]; }

  static Chart oscillators(FrequencySpec freq) {
    std::vector<int> osc(freq.dim());
    for (std::size_t j = 0; j < osc.size(); ++j) osc[j] = int(j);
    return {std::move(freq), std::move(osc)};
  }
};

using PolyField = std::vector<Polynomial>;

// Sum over oscillators of (p^2 + omega^2 q^2) / 2.
inline Polynomial harmonic_hamiltonian(const Chart& chart) {
  const std::size_t n = chart.dof();
  Polynomial h(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (chart.oscillator[i] < 0) continue;
    const double w = chart.omega_of(i);
    h += Polynomial::p(n, i).pow(2) * 0.5 + Polynomial::q(n, i).pow(2) * (0.5 * w * w);
  }
  return h;
}

// Action of frequency index j: sum of (p^2 + omega^2 q^2)/(2 omega) over its pairs.
inline Polynomial action(const Chart& chart, std::size_t j) {
  const std::size_t n = chart.dof();
  Polynomial a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (chart.oscillator[i] != int(j)) continue;
    const double w = chart.omega_of(i);
    a += (Polynomial::p(n, i).pow(2) + Polynomial::q(n, i).pow(2) * (w * w)) * (0.5 / w);
  }
  return a;
}

// Harmonic flow with angle theta_j on every pair of frequency index j.
inline std::vector<double> harmonic_rotation(const Chart& chart, std::span<const double> x,
                                             std::span<const double> theta) {
  const std::size_t n = chart.dof();
  if (x.size() != 2 * n || theta.size() != chart.freq.dim()) throw Error("rotation dimension mismatch");
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (chart.oscillator[i] < 0) continue;
    const double w = chart.omega_of(i), th = theta[std::size_t(chart.oscillator[i])];
    const double c = std::cos(th), s = std::sin(th);
    y[i] = c * x[i] + s * x[n + i] / w;
    y[n + i] = c * x[n + i] - s * w * x[i];
  }
  return y;
}

class ModeDecomposition {
 public:
  ModeDecomposition(Chart chart, std::map<std::vector<int>, Polynomial> modes)
      : chart_(std::move(chart)) {
    std::vector<Letter> letters;
    for (auto& [k, p] : modes) {
      if (p.is_zero()) continue;
      letters.emplace_back(k);
      polys_.push_back(std::move(p));
    }
    if (letters.empty()) throw Error("mode decomposition has no nonzero modes");
    alphabet_ = Alphabet::make(std::move(letters));
  }

  const Chart& chart() const { return chart_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t dof() const { return chart_.dof(); }
  const Polynomial& mode(LetterId a) const { return polys_.at(a); }
  const Polynomial& mode(const Letter& k) const { return polys_.at(alphabet_->id_of(k)); }

  Polynomial sum() const {
    Polynomial s(dof());
    for (const auto& p : polys_) s += p;
    return s;
  }

 private:
  Chart chart_;
  AlphabetPtr alphabet_;
  std::vector<Polynomial> polys_;
};

namespace detail {

inline double binomial(unsigned n, unsigned k) {
  double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// q^a p^b of one oscillator pair split by mode, through z = p + i w q
// (mode +1) and conj(z) = p - i w q (mode -1).
inline std::map<int, Polynomial> split_pair(std::size_t dof, std::size_t i, double w, unsigned a, unsigned b) {
  using C = std::complex<double>;
  const Polynomial z = Polynomial::p(dof, i) + Polynomial::q(dof, i) * C(0, w);
  const Polynomial zb = Polynomial::p(dof, i) - Polynomial::q(dof, i) * C(0, w);
  const C scale = 1.0 / (std::pow(C(0, 2 * w), int(a)) * std::pow(2.0, int(b)));
  std::map<std::pair<unsigned, unsigned>, C> zz;
  for (unsigned u = 0; u <= a; ++u)
    for (unsigned v = 0; v <= b; ++v) {
      const double sign = ((a - u) % 2 == 0) ? 1.0 : -1.0;
      zz[{u + v, (a - u) + (b - v)}] += scale * sign * binomial(a, u) * binomial(b, v);
    }
  std::map<int, Polynomial> out;
  for (const auto& [rs, c] : zz) {
    const int mode = int(rs.first) - int(rs.second);
    auto it = out.try_emplace(mode, dof).first;
    it->second += z.pow(rs.first) * zb.pow(rs.second) * c;
  }
  return out;
}

}  // namespace detail

// Splits H into parts H_k with H_k(R_theta x) = exp(i k.theta) H_k(x).
inline ModeDecomposition fourier_modes(const Polynomial& h, const Chart& chart) {
  const std::size_t n = chart.dof();
  if (h.dof() != n) throw Error("polynomial and chart have different degrees of freedom");
  const std::size_t d = chart.freq.dim();
  std::map<std::tuple<std::size_t, unsigned, unsigned>, std::map<int, Polynomial>> cache;
  std::map<std::vector<int>, Polynomial> modes;
  for (const auto& [m, c] : h.terms()) {
    // Partial products over the pairs handled so far, keyed by mode vector.
    std::map<std::vector<int>, Polynomial> partial;
    partial.emplace(std::vector<int>(d, 0), Polynomial::constant(n, c));
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned a = m[i], b = m[n + i];
      if (a == 0 && b == 0) continue;
      std::map<int, Polynomial> pieces;
      if (chart.oscillator[i] < 0) {
        Monomial mono;
        mono.set(i, a);
        mono.set(n + i, b);
        Polynomial p(n);
        p.add_term(mono, 1.0);
        pieces.emplace(0, std::move(p));
      } else {
        auto key = std::make_tuple(i, a, b);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, detail::split_pair(n, i, chart.omega_of(i), a, b)).first;
        pieces = it->second;
      }
      std::map<std::vector<int>, Polynomial> next;
      for (const auto& [k, poly] : partial) {
        for (const auto& [md, piece] : pieces) {
          std::vector<int> kk = k;
          if (chart.oscillator[i] >= 0) kk[std::size_t(chart.oscillator[i])] += md;
          next.try_emplace(kk, n).first->second += poly * piece;
        }
      }
      partial = std::move(next);
    }
    for (auto& [k, poly] : partial) modes.try_emplace(k, n).first->second += poly;
  }
  return ModeDecomposition(chart, std::move(modes));
}

// q' = dH/dp, p' = -dH/dq.
inline PolyField hamiltonian_vector_field(const Polynomial& h) {
  const std::size_t n = h.dof();
  PolyField f;
  f.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) f.push_back(h.derivative(n + i));
  for (std::size_t i = 0; i < n; ++i) f.push_back(-h.derivative(i));
  return f;
}

// (dF) G, componentwise sum_j dF_i/dx_j G_j.
inline PolyField jacobian_times(const PolyField& f, const PolyField& g) {
  PolyField out;
  out.reserve(f.size());
  for (const auto& fi : f) {
    Polynomial s(fi.dof());
    for (std::size_t j = 0; j < g.size(); ++j)
      if (!g[j].is_zero()) s += fi.derivative(j) * g[j];
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<std::complex<double>> evaluate(const PolyField& f, std::span<const double> x) {
  std::vector<std::complex<double>> v;
  v.reserve(f.size());
  for (const auto& p : f) v.push_back(p(x));
  return v;
}

// H_{a1...an} = (1/n) {H_an, {..., {H_a2, H_a1}...}}, so that the Hamiltonian
// field of sum beta_w H_w is sum beta_w f_w for beta in the algebra.
class WordHamiltonians {
 public:
  explicit WordHamiltonians(const ModeDecomposition& modes) : modes_(&modes) {}

  // Nested bracket without the 1/n factor.
  const Polynomial& nested(const Word& w) const {
    if (w.empty()) throw Error("word Hamiltonian of the empty word is undefined");
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    Polynomial p = w.size() == 1 ? modes_->mode(w[0])
                                 : poisson_bracket(modes_->mode(w[w.size() - 1]), nested(w.prefix(w.size() - 1)));
    return cache_.emplace(w, std::move(p)).first->second;
  }

  Polynomial operator()(const Word& w) const { return nested(w) * (1.0 / double(w.size())); }

 private:
  const ModeDecomposition* modes_;
  mutable std::map<Word, Polynomial> cache_;
};

inline Polynomial word_hamiltonian(const Word& w, const ModeDecomposition& modes) {
  return WordHamiltonians(modes)(w);
}

// Word-basis fields f_{a1...an} = (d f_{a2...an}) f_{a1}, built symbolically.
class WordBasis {
 public:
  explicit WordBasis(const ModeDecomposition& modes) : modes_(&modes) {}

  const PolyField& field(const Word& w) const {
    if (w.empty()) throw Error("the empty word has no basis field");
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    PolyField f = w.size() == 1 ? hamiltonian_vector_field(modes_->mode(w[0]))
                                : jacobian_times(field(w.suffix_from(1)), field(w.prefix(1)));
    return cache_.emplace(w, std::move(f)).first->second;
  }

  std::vector<std::complex<double>> operator()(const Word& w, std::span<const double> x) const {
    return evaluate(field(w), x);
  }

 private:
  const ModeDecomposition* modes_;
  mutable std::map<Word, PolyField> cache_;
};

inline std::vector<std::complex<double>> word_basis_function(const Word& w, const ModeDecomposition& modes,
                                                             std::span<const double> x) {
  return WordBasis(modes)(w, x);
}

// sum_j v_j a_j + sum_w beta_w H_w over words of length <= N. Words sharing a
// prefix u are grouped: sum_a beta_{ua} {H_a, N_u} = {sum_a beta_{ua} H_a, N_u}.
inline Polynomial modified_hamiltonian(const ExtCoeff& e, const ModeDecomposition& modes, std::size_t N) {
  const auto& alphabet = *modes.alphabet();
  if (!(e.delta.alphabet() == alphabet)) throw Error("coefficients and modes use different alphabets");
  const std::size_t n = modes.dof();
  Polynomial h(n);
  for (std::size_t j = 0; j < e.v.size(); ++j)
    if (e.v[j] != Complex{}) h += action(modes.chart(), j) * e.v[j];
  const WordHamiltonians nested(modes);
  std::map<Word, Polynomial> grouped;  // prefix u -> sum_a beta_{ua} H_a
  for (const auto& [w, c] : e.delta.entries()) {
    if (w.empty() || w.size() > N) continue;
    if (w.size() == 1) {
      h += modes.mode(w[0]) * c;
      continue;
    }
    grouped.try_emplace(w.prefix(w.size() - 1), n).first->second += modes.mode(w[w.size() - 1]) * c;
  }
  for (const auto& [u, g] : grouped) h += poisson_bracket(g, nested.nested(u)) * (1.0 / double(u.size() + 1));
  return h;
}

inline Polynomial modified_hamiltonian(const CoeffMap& beta, const ModeDecomposition& modes, std::size_t N) {
  return modified_hamiltonian(ExtCoeff(CVector(beta.alphabet().dim()), beta), modes, N);
}

}  // namespace wordseries
