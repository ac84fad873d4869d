#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "wordseries/word.hpp"

namespace wordseries {

using Rational = boost::rational<std::int64_t>;

// Each omega_j written as sum_s matrix[j][s] * values[s] with rational entries,
// over basis symbols assumed linearly independent over the rationals.
struct ExactBasis {
  std::vector<std::string> symbols;
  std::vector<double> values;
  std::vector<std::vector<Rational>> matrix;  // d x s
};

struct WordFrequency {
  double mu = 0;
  bool is_zero = true;
};

class FrequencySpec {
 public:
  explicit FrequencySpec(std::vector<double> omega, std::optional<ExactBasis> exact = {},
                         double tol = 1e-9)
      : omega_(std::move(omega)), exact_(std::move(exact)), tol_(tol) {
    if (omega_.empty()) throw Error("frequency vector must be nonempty");
    for (double w : omega_)
      if (!(w > 0) || !std::isfinite(w)) throw Error("frequencies must be positive and finite");
    if (exact_) {
      const auto& e = *exact_;
      if (e.symbols.size() != e.values.size()) throw Error("basis symbols/values size mismatch");
      if (e.matrix.size() != omega_.size()) throw Error("rational matrix needs one row per frequency");
      for (std::size_t j = 0; j < omega_.size(); ++j) {
        if (e.matrix[j].size() != e.values.size()) throw Error("rational matrix row has wrong length");
        double v = 0;
        for (std::size_t s = 0; s < e.values.size(); ++s) v += boost::rational_cast<double>(e.matrix[j][s]) * e.values[s];
        if (std::abs(v - omega_[j]) > 1e-12 * std::max(1.0, std::abs(omega_[j])))
          throw Error("exact form disagrees with numeric frequency " + std::to_string(j));
      }
    }
  }

  // Builds the numeric vector from an exact form.
  static FrequencySpec from_exact(ExactBasis basis, double tol = 1e-9) {
    std::vector<double> omega;
    for (const auto& row : basis.matrix) {
      double v = 0;
      for (std::size_t s = 0; s < row.size(); ++s) v += boost::rational_cast<double>(row[s]) * basis.values.at(s);
      omega.push_back(v);
    }
    return FrequencySpec(std::move(omega), std::move(basis), tol);
  }

  std::size_t dim() const { return omega_.size(); }
  const std::vector<double>& omega() const { return omega_; }
  double operator[](std::size_t j) const { return omega_[j]; }
  const std::optional<ExactBasis>& exact_form() const { return exact_; }
  double tolerance() const { return tol_; }

  WordFrequency of(const std::vector<int>& k) const {
    if (k.size() != omega_.size()) throw Error("multi-index dimension does not match frequencies");
    if (exact_) {
      const auto& e = *exact_;
      bool zero = true;
      double mu = 0;
      for (std::size_t s = 0; s < e.values.size(); ++s) {
        Rational c = 0;
        for (std::size_t j = 0; j < k.size(); ++j)
          if (k[j] != 0) c += e.matrix[j][s] * Rational(k[j]);
        if (c.numerator() != 0) zero = false;  // rational != int recurses under C++20 rewritten comparisons
        mu += boost::rational_cast<double>(c) * e.values[s];
      }
      return zero ? WordFrequency{0.0, true} : WordFrequency{mu, false};
    }
    double mu = 0, knorm = 0, wnorm = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      mu += k[j] * omega_[j];
      knorm += double(k[j]) * k[j];
      wnorm += omega_[j] * omega_[j];
    }
    if (std::abs(mu) <= tol_ * std::sqrt(knorm) * std::sqrt(wnorm)) return {0.0, true};
    return {mu, false};
  }

 private:
  std::vector<double> omega_;
  std::optional<ExactBasis> exact_;
  double tol_;
};

inline WordFrequency word_frequency(const Word& w, const Alphabet& alphabet, const FrequencySpec& freq) {
  if (alphabet.dim() != freq.dim()) throw Error("alphabet and frequency dimensions differ");
  return freq.of(letter_sum(w, alphabet));
}

inline bool is_oscillatory(const Word& w, const Alphabet& alphabet, const FrequencySpec& freq) {
  return !word_frequency(w, alphabet, freq).is_zero;
}

}  // namespace wordseries
