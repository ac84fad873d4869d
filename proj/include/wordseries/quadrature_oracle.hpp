#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wordseries/frequency.hpp"
#include "wordseries/word.hpp"

namespace wordseries {

// Iterated integral over 0 < s_1 < ... < s_n < t of prod_j exp(i mu_j s_j),
// independent of the closed forms. The outermost integral is adaptive
// Gauss-Kronrod; inner ones use composite Gauss-Legendre with panels sized to
// the oscillation.
inline std::complex<double> simplex_quadrature(const std::vector<double>& mu, double t, double tol = 1e-12) {
  using C = std::complex<double>;
  using GL = boost::math::quadrature::gauss<double, 20>;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (mu.empty()) return C(1.0);
  double mu_max = 0;
  for (double m : mu) mu_max = std::max(mu_max, std::abs(m));

  struct Nested {
    const std::vector<double>& mu;
    double mu_max;
    C operator()(std::size_t n, double upper) const {
      if (n == 0) return C(1.0);
      const int panels = 1 + int(std::ceil(mu_max * std::abs(upper) / 4.0));
      const double w = upper / panels;
      C sum{};
      for (int p = 0; p < panels; ++p) {
        const double a = p * w;
        sum += GL::integrate([&](double s) { return (*this)(n - 1, s) * std::exp(C(0, mu[n - 1] * s)); }, a, a + w);
      }
      return sum;
    }
  } nested{mu, mu_max};

  const std::size_t n = mu.size();
  auto f = [&](double s) { return nested(n - 1, s) * std::exp(C(0, mu[n - 1] * s)); };
  return GK::integrate(f, 0.0, t, 10, tol);
}

inline std::complex<double> simplex_quadrature(const Word& w, const Alphabet& alphabet, const FrequencySpec& freq,
                                               double t, double tol = 1e-12) {
  std::vector<double> mu;
  for (auto a : w) mu.push_back(word_frequency(Word{a}, alphabet, freq).mu);
  return simplex_quadrature(mu, t, tol);
}

}  // namespace wordseries
