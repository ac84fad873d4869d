#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wordseries/wordseries.hpp"

namespace testing_support {

using namespace wordseries;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  Complex cnum(double scale = 1.0) { return {scale * uniform(-1, 1), scale * uniform(-1, 1)}; }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline CoeffMap letter_element(const AlphabetPtr& a, std::size_t id, std::size_t N, Complex c = 1.0) {
  CoeffMap e(a, N);
  e.set(Word{LetterId(id)}, c);
  return e;
}

// Random element of the algebra: a combination of letters, brackets of pairs
// and brackets of triples (Lie polynomials satisfy the shuffle relations).
inline CoeffMap random_lie(Rng& rng, const AlphabetPtr& a, std::size_t N) {
  CoeffMap b(a, N);
  const std::size_t n = a->size();
  for (std::size_t i = 0; i < n; ++i) b += letter_element(a, i, N, rng.cnum());
  if (N >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) b += bracket(letter_element(a, i, N), letter_element(a, j, N)) * rng.cnum(0.5);
  if (N >= 3)
    for (int t = 0; t < 6; ++t) {
      const auto i = rng.index(n), j = rng.index(n), k = rng.index(n);
      b += bracket(letter_element(a, i, N), bracket(letter_element(a, j, N), letter_element(a, k, N))) * rng.cnum(0.25);
    }
  if (N >= 4)
    for (int t = 0; t < 4; ++t) {
      const auto i = rng.index(n), j = rng.index(n), k = rng.index(n), l = rng.index(n);
      b += bracket(bracket(letter_element(a, i, N), letter_element(a, j, N)),
                   bracket(letter_element(a, k, N), letter_element(a, l, N))) *
           rng.cnum(0.1);
    }
  return b;
}

inline CoeffMap random_group(Rng& rng, const AlphabetPtr& a, std::size_t N) { return exp_star(random_lie(rng, a, N)); }

// Arbitrary map with the given empty-word coefficient, no structure.
inline CoeffMap random_map(Rng& rng, const AlphabetPtr& a, std::size_t N, Complex empty) {
  CoeffMap d(a, N);
  for_each_word(a->size(), N, [&](const Word& w) { d.set(w, w.empty() ? empty : rng.cnum()); });
  return d;
}

// Letters +-e_j and a few combinations over d dimensions.
inline AlphabetPtr signed_alphabet(std::size_t d, std::size_t letters) {
  std::vector<Letter> ls;
  for (std::size_t j = 0; j < d && ls.size() < letters; ++j) {
    std::vector<int> k(d, 0);
    k[j] = 1;
    ls.emplace_back(k);
    if (ls.size() == letters) break;
    k[j] = -1;
    ls.emplace_back(k);
  }
  for (std::size_t j = 0; ls.size() < letters; ++j) {
    std::vector<int> k(d, 0);
    k[j % d] = 1;
    k[(j + 1) % d] += 1;
    if (ls.size() < letters) ls.emplace_back(k);
  }
  return Alphabet::make(std::move(ls));
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Exact forced-oscillator solution of q'' = -w^2 q + F from (q0, p0).
inline std::vector<double> forced_exact(double w, double F, double q0, double p0, double t) {
  const double qs = F / (w * w);
  const double c = std::cos(w * t), s = std::sin(w * t);
  const double q = qs + (q0 - qs) * c + p0 / w * s;
  const double p = -(q0 - qs) * w * s + p0 * c;
  return {q, p};
}

}  // namespace testing_support
