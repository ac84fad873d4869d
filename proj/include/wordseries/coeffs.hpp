#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "wordseries/exppoly.hpp"
#include "wordseries/extended.hpp"
#include "wordseries/scheme.hpp"

namespace wordseries {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised when exp(i mu h) = 1 for an oscillatory word.
class ResonanceError : public Error {
 public:
  ResonanceError(Word w, std::string word_text, double mu, double h, long j)
      : Error("numerical resonance on word " + word_text + ": mu*h = " + std::to_string(mu * h) +
              " = 2*pi*" + std::to_string(j)),
        word(w), word_text(std::move(word_text)), mu(mu), h(h), j(j) {}

  Word word;
  std::string word_text;
  double mu;
  double h;
  long j;
};

inline bool numerically_resonant(double mu, double h, double tol) {
  return mu != 0 && 2.0 * std::abs(std::sin(0.5 * mu * h)) <= tol;
}

namespace detail {

// Exact frequencies of the suffixes of w, empty suffix included.
inline std::vector<double> suffix_frequencies(const Word& w, const Alphabet& alphabet,
                                              const FrequencySpec& freq) {
  std::vector<double> out;
  out.reserve(w.size() + 1);
  for (std::size_t i = 0; i <= w.size(); ++i) out.push_back(word_frequency(w.suffix_from(i), alphabet, freq).mu);
  return out;
}

inline std::vector<double> letter_frequencies(const Alphabet& alphabet, const FrequencySpec& freq) {
  std::vector<double> mu(alphabet.size());
  for (std::size_t a = 0; a < alphabet.size(); ++a)
    mu[a] = word_frequency(Word{static_cast<LetterId>(a)}, alphabet, freq).mu;
  return mu;
}

inline constexpr double kSnapTol = 1e-9;

}  // namespace detail

// alpha_w(t) as exponential polynomials for every word of length <= N:
// alpha_{wa}(t) = int_0^t alpha_w(s) exp(i mu_a s) ds.
inline std::map<Word, ExpPoly> flow_exppolys(const FrequencySpec& freq, const AlphabetPtr& alphabet,
                                             std::size_t N) {
  const auto mu = detail::letter_frequencies(*alphabet, freq);
  std::map<Word, ExpPoly> out;
  out.emplace(Word{}, ExpPoly::constant(1.0));
  for (std::size_t n = 1; n <= N; ++n) {
    for_each_word_of_length(alphabet->size(), n, [&](const Word& w) {
      const Word head = w.prefix(n - 1);
      ExpPoly p = out.at(head).times_exp(mu[w[n - 1]]).antiderivative();
      p.snap(detail::suffix_frequencies(w, *alphabet, freq), detail::kSnapTol);
      out.emplace(w, std::move(p));
    });
  }
  return out;
}

inline ExpPoly flow_exppoly(const FrequencySpec& freq, const Alphabet& alphabet, const Word& w) {
  ExpPoly p = ExpPoly::constant(1.0);
  for (std::size_t n = 1; n <= w.size(); ++n) {
    const Word head = w.prefix(n);
    const double mu = word_frequency(Word{w[n - 1]}, alphabet, freq).mu;
    p = p.times_exp(mu).antiderivative();
    p.snap(detail::suffix_frequencies(head, alphabet, freq), detail::kSnapTol);
  }
  return p;
}

inline Complex flow_coefficient(const FrequencySpec& freq, const Alphabet& alphabet, const Word& w, double t) {
  return flow_exppoly(freq, alphabet, w)(t);
}

inline CoeffMap flow_coefficients(const FrequencySpec& freq, const AlphabetPtr& alphabet, std::size_t N,
                                  double t) {
  CoeffMap out(alphabet, N);
  for (const auto& [w, p] : flow_exppolys(freq, alphabet, N)) out.set(w, p(t));
  return out;
}

// A_w(h) = alpha_w(h) / h^n.
inline CoeffMap scale_by_length(const CoeffMap& d, double h) {
  return d.transformed([&](const Word& w, Complex c) { return c / std::pow(h, double(w.size())); });
}

inline CoeffMap scaled_flow_coefficients(const FrequencySpec& freq, const AlphabetPtr& alphabet,
                                         std::size_t N, double h) {
  return scale_by_length(flow_coefficients(freq, alphabet, N, h), h);
}

// Flow of the autonomous extended field (omega, beta), beta in g: the
// coefficients solve d/dt alpha = alpha * Xi_{t omega} beta, alpha(0) = 1.
inline std::map<Word, ExpPoly> field_flow_exppolys(const CoeffMap& beta, const FrequencySpec& freq) {
  if (std::abs(beta.empty_coeff()) > 1e-12) throw Error("field coefficients must lie in the algebra");
  const Alphabet& alphabet = beta.alphabet();
  const std::size_t N = beta.max_len();
  std::vector<std::pair<Word, std::pair<Complex, double>>> gens;
  for (const auto& [v, c] : beta.entries()) gens.push_back({v, {c, word_frequency(v, alphabet, freq).mu}});

  std::map<Word, ExpPoly> integrand;
  std::map<Word, ExpPoly> out;
  out.emplace(Word{}, ExpPoly::constant(1.0));
  auto push = [&](const Word& u, const ExpPoly& alpha_u) {
    for (const auto& [v, cm] : gens) {
      if (u.size() + v.size() > N) break;
      integrand[concat(u, v)] += alpha_u.times_exp(cm.second) * cm.first;
    }
  };
  push(Word{}, out.at(Word{}));
  for (auto it = integrand.begin(); it != integrand.end(); ++it) {
    ExpPoly a = it->second.antiderivative();
    a.snap(detail::suffix_frequencies(it->first, alphabet, freq), detail::kSnapTol);
    if (a.is_zero()) continue;
    auto& stored = out.emplace(it->first, std::move(a)).first->second;
    push(it->first, stored);
  }
  return out;
}

inline CoeffMap field_flow(const CoeffMap& beta, const FrequencySpec& freq, double t) {
  CoeffMap out(beta.alphabet_ptr(), beta.max_len());
  for (const auto& [w, p] : field_flow_exppolys(beta, freq)) out.set(w, p(t));
  return out;
}

// Base perturbation element: 1 on every one-letter word.
inline CoeffMap base_field(const AlphabetPtr& alphabet, std::size_t N) {
  CoeffMap b(alphabet, N);
  for (std::size_t a = 0; a < alphabet->size(); ++a) b.set(Word{static_cast<LetterId>(a)}, 1.0);
  return b;
}

// Product over the runs of j_seq of 1/(run length)!.
inline Rational sigma(const std::vector<int>& j_seq) {
  for (std::size_t i = 1; i < j_seq.size(); ++i)
    if (j_seq[i] < j_seq[i - 1]) throw Error("sigma needs a nondecreasing index list");
  Rational s = 1;
  std::size_t run = 0;
  for (std::size_t i = 0; i < j_seq.size(); ++i) {
    run = (i > 0 && j_seq[i] == j_seq[i - 1]) ? run + 1 : 1;
    s /= static_cast<std::int64_t>(run);
  }
  return s;
}

namespace detail {

// Sum over 1 <= j_1 <= ... <= j_n <= r of b_j... sigma exp(i h sum c_{j_i} mu_{k_i}),
// carried as states (last index, current run length) -> partial sum.
class SplittingRecursion {
 public:
  SplittingRecursion(const SplittingScheme& scheme, const std::vector<double>& letter_mu, double h)
      : r_(scheme.stages()), b_(scheme.b()) {
    const auto c = scheme.c();
    phase_.resize(r_ * letter_mu.size());
    for (std::size_t j = 0; j < r_; ++j)
      for (std::size_t a = 0; a < letter_mu.size(); ++a)
        phase_[j * letter_mu.size() + a] = letter_mu[a] == 0 ? Complex(1.0) : std::polar(1.0, c[j] * letter_mu[a] * h);
    letters_ = letter_mu.size();
  }

  // state[j][run] for words of length n; run in 1..n.
  using State = std::vector<std::vector<Complex>>;

  State start() const { return {}; }

  State extend(const State& s, LetterId a) const {
    const std::size_t n = s.empty() ? 0 : s.front().size() - 1;
    State out(r_, std::vector<Complex>(n + 2));
    if (s.empty()) {
      for (std::size_t j = 0; j < r_; ++j) out[j][1] = b_[j] * phase(j, a);
      return out;
    }
    for (std::size_t j = 0; j < r_; ++j) {
      for (std::size_t run = 1; run <= n; ++run) {
        const Complex x = s[j][run];
        if (x == Complex{}) continue;
        out[j][run + 1] += x * b_[j] * phase(j, a) / double(run + 1);
        for (std::size_t jj = j + 1; jj < r_; ++jj) out[jj][1] += x * b_[jj] * phase(jj, a);
      }
    }
    return out;
  }

  static Complex total(const State& s) {
    if (s.empty()) return 1.0;
    Complex t{};
    for (const auto& row : s)
      for (auto x : row) t += x;
    return t;
  }

 private:
  Complex phase(std::size_t j, LetterId a) const { return phase_[j * letters_ + a]; }
  std::size_t r_;
  std::size_t letters_ = 0;
  std::vector<double> b_;
  std::vector<Complex> phase_;
};

}  // namespace detail

// Coefficients (h a_sum omega, alpha~(h)) of one step of the splitting scheme.
inline ExtCoeff splitting_coefficients(const SplittingScheme& scheme, const FrequencySpec& freq,
                                       const AlphabetPtr& alphabet, std::size_t N, double h) {
  const detail::SplittingRecursion rec(scheme, detail::letter_frequencies(*alphabet, freq), h);
  CoeffMap alpha(alphabet, N);
  std::map<Word, detail::SplittingRecursion::State> level;
  level.emplace(Word{}, rec.start());
  alpha.set(Word{}, 1.0);
  for (std::size_t n = 1; n <= N; ++n) {
    std::map<Word, detail::SplittingRecursion::State> next;
    for (const auto& [u, st] : level) {
      for (std::size_t a = 0; a < alphabet->size(); ++a) {
        Word w = u;
        w.push_back(static_cast<LetterId>(a));
        auto s = rec.extend(st, static_cast<LetterId>(a));
        alpha.set(w, std::pow(h, double(n)) * detail::SplittingRecursion::total(s));
        if (n < N) next.emplace(w, std::move(s));
      }
    }
    level = std::move(next);
  }
  return {to_cvector(freq.omega(), h * scheme.a_sum()), std::move(alpha)};
}

inline Complex splitting_coefficient(const SplittingScheme& scheme, const FrequencySpec& freq,
                                     const Alphabet& alphabet, const Word& w, double h) {
  const detail::SplittingRecursion rec(scheme, detail::letter_frequencies(alphabet, freq), h);
  auto s = rec.start();
  for (auto a : w) s = rec.extend(s, a);
  return std::pow(h, double(w.size())) * detail::SplittingRecursion::total(s);
}

// tau_w(t) = t^n / n! on every word: flow of the perturbation alone.
inline CoeffMap taylor_coefficients(const AlphabetPtr& alphabet, std::size_t N, double t) {
  CoeffMap tau(alphabet, N);
  double term = 1.0;
  for (std::size_t n = 0; n <= N; ++n) {
    if (n > 0) term *= t / double(n);
    for_each_word_of_length(alphabet->size(), n, [&](const Word& w) { tau.set(w, term); });
  }
  return tau;
}

inline ExtCoeff splitting_coefficients_by_composition(const SplittingScheme& scheme, const FrequencySpec& freq,
                                                      const AlphabetPtr& alphabet, std::size_t N, double h) {
  ExtCoeff acc = ExtCoeff::unit(alphabet, N);
  const CVector zero(freq.dim());
  for (std::size_t j = 0; j < scheme.stages(); ++j) {
    acc = big_star(acc, ExtCoeff(to_cvector(freq.omega(), scheme.a()[j] * h), CoeffMap::unit(alphabet, N)));
    acc = big_star(acc, ExtCoeff(zero, taylor_coefficients(alphabet, N, scheme.b()[j] * h)));
  }
  return acc;
}

// Scaled quadrature error A~_w(h) - A_w(h).
inline Complex quadrature_error(const SplittingScheme& scheme, const FrequencySpec& freq,
                                const Alphabet& alphabet, const Word& w, double h) {
  const double scale = std::pow(h, double(w.size()));
  return (splitting_coefficient(scheme, freq, alphabet, w, h) - flow_coefficient(freq, alphabet, w, h)) / scale;
}

// (h (a_sum - 1) omega, alpha~(h) - alpha(h)).
inline ExtCoeff local_error_coefficients(const SplittingScheme& scheme, const FrequencySpec& freq,
                                         const AlphabetPtr& alphabet, std::size_t N, double h) {
  ExtCoeff num = splitting_coefficients(scheme, freq, alphabet, N, h);
  ExtCoeff exact(to_cvector(freq.omega(), h), flow_coefficients(freq, alphabet, N, h));
  return num - exact;
}

struct MStepTerm {
  LetterId letter = 0;
  double mu = 0;
  bool oscillatory = false;
  bool resonant = false;
  Complex predicted;  // coefficient of f_k in the m-step error
  Complex composed;   // same coefficient from big_star powers
};

struct MStepErrors {
  std::size_t m = 0;
  CVector vector_part;
  std::vector<MStepTerm> terms;
  double max_discrepancy = 0;
};

inline MStepErrors m_step_error_coefficients(const SplittingScheme& scheme, const FrequencySpec& freq,
                                             const AlphabetPtr& alphabet, double h, std::size_t m,
                                             double resonance_tol = 1e-9) {
  if (m < 1) throw Error("m-step error needs m >= 1");
  const ExtCoeff step = splitting_coefficients(scheme, freq, alphabet, 1, h);
  const ExtCoeff exact(to_cvector(freq.omega(), h), flow_coefficients(freq, alphabet, 1, h));
  const ExtCoeff diff = ext_power(step, m) - ext_power(exact, m);

  MStepErrors out;
  out.m = m;
  out.vector_part = diff.v;
  const Complex i1(0, 1);
  for (std::size_t a = 0; a < alphabet->size(); ++a) {
    const Word w{static_cast<LetterId>(a)};
    const auto f = word_frequency(w, *alphabet, freq);
    MStepTerm t;
    t.letter = static_cast<LetterId>(a);
    t.mu = f.mu;
    t.oscillatory = !f.is_zero;
    t.resonant = numerically_resonant(f.mu, h, resonance_tol);
    const Complex at = step.delta[w] / h;
    const Complex ex = exact.delta[w] / h;
    if (!t.oscillatory)
      t.predicted = double(m) * h * (at - ex);
    else if (t.resonant)
      t.predicted = double(m) * h * at;
    else
      t.predicted = h * (std::exp(i1 * f.mu * double(m) * h) - 1.0) / (std::exp(i1 * f.mu * h) - 1.0) * (at - ex);
    t.composed = diff.delta[w];
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(t.predicted - t.composed));
    out.terms.push_back(t);
  }
  return out;
}

// Nonzero frequency sums reachable with at most N letters, keyed by the
// letter sum, with the smallest letter count that reaches each.
struct ReachableFrequency {
  std::vector<int> k;
  double mu = 0;
  std::size_t order = 0;
  Word word;
};

inline std::vector<ReachableFrequency> reachable_frequencies(const FrequencySpec& freq, const Alphabet& alphabet,
                                                             std::size_t N) {
  std::map<std::vector<int>, ReachableFrequency> seen;
  std::vector<std::pair<std::vector<int>, Word>> frontier{{std::vector<int>(alphabet.dim(), 0), Word{}}};
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<std::pair<std::vector<int>, Word>> next;
    for (const auto& [k, w] : frontier) {
      for (std::size_t a = 0; a < alphabet.size(); ++a) {
        std::vector<int> kk = k;
        const auto& l = alphabet.letter(static_cast<LetterId>(a));
        for (std::size_t j = 0; j < kk.size(); ++j) kk[j] += l[j];
        if (seen.count(kk)) continue;
        Word ww = w;
        ww.push_back(static_cast<LetterId>(a));
        seen.emplace(kk, ReachableFrequency{kk, freq.of(kk).mu, n, ww});
        next.emplace_back(std::move(kk), ww);
      }
    }
    frontier = std::move(next);
  }
  std::vector<ReachableFrequency> out;
  for (auto& [k, r] : seen)
    if (!freq.of(k).is_zero) out.push_back(std::move(r));
  return out;
}

struct Resonance {
  double h = 0;
  double mu = 0;
  long j = 0;
  std::size_t order = 0;
  std::vector<int> k;
  Word word;
  std::size_t coincident = 1;  // number of (mu, j) pairs landing on this h
};

struct ResonanceReport {
  double h_min = 0, h_max = 0;
  std::size_t max_order = 0;
  std::vector<Resonance> entries;  // sorted by h

  std::vector<double> step_sizes(std::size_t order) const {
    std::vector<double> out;
    for (const auto& e : entries)
      if (e.order <= order) out.push_back(e.h);
    return out;
  }
};

// All h in [h_min, h_max) with mu h in 2 pi Z \ {0} for a reachable mu.
inline ResonanceReport detect_numerical_resonances(const FrequencySpec& freq, const Alphabet& alphabet,
                                                   std::size_t N, double h_min, double h_max) {
  if (!(h_min > 0) || !(h_max > h_min)) throw Error("resonance range needs 0 < h_min < h_max");
  std::vector<Resonance> raw;
  for (const auto& r : reachable_frequencies(freq, alphabet, N)) {
    const double am = std::abs(r.mu);
    const long j0 = static_cast<long>(std::ceil(am * h_min / kTwoPi));
    for (long j = std::max(1L, j0);; ++j) {
      const double h = kTwoPi * double(j) / am;
      if (h >= h_max) break;
      if (h < h_min) continue;
      raw.push_back({h, r.mu, r.mu > 0 ? j : -j, r.order, r.k, r.word, 1});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Resonance& x, const Resonance& y) {
    if (x.h != y.h) return x.h < y.h;
    if (x.order != y.order) return x.order < y.order;
    return x.k < y.k;
  });
  ResonanceReport rep{h_min, h_max, N, {}};
  for (auto& r : raw) {
    if (!rep.entries.empty() && std::abs(r.h - rep.entries.back().h) <= 1e-12 * r.h) {
      auto& last = rep.entries.back();
      ++last.coincident;
      if (r.order < last.order) {
        const auto count = last.coincident;
        last = r;
        last.coincident = count;
      }
      continue;
    }
    rep.entries.push_back(std::move(r));
  }
  return rep;
}

// Resonant frequency sums at a single step size.
inline std::vector<ReachableFrequency> classify_step(const FrequencySpec& freq, const Alphabet& alphabet,
                                                     std::size_t N, double h, double tol = 1e-9) {
  std::vector<ReachableFrequency> out;
  for (auto& r : reachable_frequencies(freq, alphabet, N))
    if (numerically_resonant(r.mu, h, tol)) out.push_back(std::move(r));
  return out;
}

}  // namespace wordseries
