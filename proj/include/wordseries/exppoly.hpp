#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "wordseries/word.hpp"

namespace wordseries {

// Finite sum of c * t^m * exp(i lambda t), kept sorted by (lambda, m) with
// equal pairs merged.
class ExpPoly {
 public:
  using Complex = std::complex<double>;
  struct Term {
    Complex c;
    int m = 0;
    double lambda = 0;
  };

  ExpPoly() = default;
  explicit ExpPoly(std::vector<Term> terms) : terms_(std::move(terms)) { canonicalize(); }

  static ExpPoly constant(Complex c) { return ExpPoly({{c, 0, 0.0}}); }
  static ExpPoly exponential(double lambda, Complex c = 1.0) { return ExpPoly({{c, 0, lambda}}); }
  static ExpPoly monomial(int m, Complex c = 1.0) { return ExpPoly({{c, m, 0.0}}); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex operator()(double t) const {
    Complex s{};
    for (const auto& tm : terms_) {
      Complex v = tm.c * std::pow(t, tm.m);
      if (tm.lambda != 0) v *= std::polar(1.0, tm.lambda * t);
      s += v;
    }
    return s;
  }

  // Primitive vanishing at t = 0.
  ExpPoly antiderivative() const {
    std::vector<Term> out;
    const Complex i1(0, 1);
    for (const auto& tm : terms_) {
      if (tm.lambda == 0) {
        out.push_back({tm.c / double(tm.m + 1), tm.m + 1, 0.0});
        continue;
      }
      // int s^m e^{ils} = e^{ils} sum_j (-1)^j m!/(m-j)! s^{m-j} / (il)^{j+1}
      const Complex il = i1 * tm.lambda;
      Complex denom = il;
      double falling = 1;
      for (int j = 0; j <= tm.m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const Complex coef = tm.c * sign * falling / denom;
        out.push_back({coef, tm.m - j, tm.lambda});
        if (j == tm.m) out.push_back({-coef, 0, 0.0});
        falling *= double(tm.m - j);
        denom *= il;
      }
    }
    return ExpPoly(std::move(out));
  }

  Complex integrate(double s) const { return antiderivative()(s); }

  // Multiplies by exp(i lambda t).
  ExpPoly times_exp(double lambda) const {
    ExpPoly r = *this;
    for (auto& tm : r.terms_) tm.lambda += lambda;
    r.canonicalize();
    return r;
  }

  // Replaces every frequency within tol of a canonical value by that value.
  void snap(const std::vector<double>& canonical, double tol) {
    for (auto& tm : terms_) {
      for (double c : canonical) {
        if (std::abs(tm.lambda - c) <= tol * std::max(1.0, std::abs(c))) {
          tm.lambda = c;
          break;
        }
      }
    }
    canonicalize();
  }

  ExpPoly& operator+=(const ExpPoly& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
  }
  ExpPoly& operator-=(const ExpPoly& o) { return *this += o * Complex(-1.0); }
  ExpPoly& operator*=(Complex s) {
    for (auto& tm : terms_) tm.c *= s;
    canonicalize();
    return *this;
  }
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(ExpPoly a, Complex s) { return a *= s; }
  friend ExpPoly operator*(Complex s, ExpPoly a) { return a *= s; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({x.c * y.c, x.m + y.m, x.lambda + y.lambda});
    return ExpPoly(std::move(out));
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) {
      return x.lambda != y.lambda ? x.lambda < y.lambda : x.m < y.m;
    });
    std::vector<Term> merged;
    for (const auto& tm : terms_) {
      if (!merged.empty() && merged.back().lambda == tm.lambda && merged.back().m == tm.m)
        merged.back().c += tm.c;
      else
        merged.push_back(tm);
    }
    std::erase_if(merged, [](const Term& x) { return x.c == Complex{}; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

inline ExpPoly exppoly_antiderivative(const ExpPoly& p) { return p.antiderivative(); }
inline std::complex<double> exppoly_integrate(const ExpPoly& p, double s) { return p.integrate(s); }

}  // namespace wordseries
