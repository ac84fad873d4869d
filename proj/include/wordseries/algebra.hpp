#pragma once

#include <cmath>
#include <vector>

#include "wordseries/coeff_map.hpp"

namespace wordseries {

// (a*b)_w = sum over w = uv of a_u b_v, truncated at the common order.
inline CoeffMap convolve(const CoeffMap& a, const CoeffMap& b) {
  a.require_compatible(b);
  const std::size_t n = a.max_len();
  CoeffMap out(a.alphabet_ptr(), n);
  for (const auto& [u, cu] : a.entries()) {
    const std::size_t room = n - u.size();
    for (const auto& [v, cv] : b.entries()) {
      if (v.size() > room) break;
      out.add(concat(u, v), cu * cv);
    }
  }
  return out;
}

namespace detail {
inline void require_empty_coeff(const CoeffMap& m, Complex expected, const char* what) {
  if (std::abs(m.empty_coeff() - expected) > 1e-12) throw Error(what);
}
}  // namespace detail

inline CoeffMap exp_star(const CoeffMap& b) {
  detail::require_empty_coeff(b, 0.0, "exp_star needs a zero empty-word coefficient");
  CoeffMap result = CoeffMap::unit(b.alphabet_ptr(), b.max_len()) + b;
  CoeffMap power = b;
  for (std::size_t j = 2; j <= b.max_len(); ++j) {
    power = convolve(power, b) * (1.0 / static_cast<double>(j));
    result += power;
  }
  return result;
}

inline CoeffMap log_star(const CoeffMap& g) {
  detail::require_empty_coeff(g, 1.0, "log_star needs an empty-word coefficient equal to 1");
  CoeffMap x = g;
  x.set(Word{}, 0.0);
  CoeffMap result = x;
  CoeffMap power = x;
  for (std::size_t j = 2; j <= g.max_len(); ++j) {
    power = convolve(power, x);
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    result += power * (sign / static_cast<double>(j));
  }
  return result;
}

// Neumann series sum_j (1 - g)^{*j}.
inline CoeffMap star_inverse(const CoeffMap& g) {
  detail::require_empty_coeff(g, 1.0, "star_inverse needs an empty-word coefficient equal to 1");
  CoeffMap x = -g;
  x.set(Word{}, 0.0);
  CoeffMap result = CoeffMap::unit(g.alphabet_ptr(), g.max_len()) + x;
  CoeffMap power = x;
  for (std::size_t j = 2; j <= g.max_len(); ++j) {
    power = convolve(power, x);
    result += power;
  }
  return result;
}

inline CoeffMap bracket(const CoeffMap& a, const CoeffMap& b) {
  detail::require_empty_coeff(a, 0.0, "bracket needs zero empty-word coefficients");
  detail::require_empty_coeff(b, 0.0, "bracket needs zero empty-word coefficients");
  return convolve(a, b) - convolve(b, a);
}

enum class Membership { group, algebra };

struct MembershipViolation {
  Word first;
  Word second;
  double residual = 0;
};

struct MembershipReport {
  bool ok = true;
  double max_residual = 0;
  std::size_t pairs_checked = 0;
  std::size_t violation_count = 0;
  std::vector<MembershipViolation> violations;  // first few only

  explicit operator bool() const { return ok; }
};

// Checks the shuffle relations on every pair of nonempty words with combined
// length <= N (pairs taken up to order since shuffle is commutative).
inline MembershipReport verify_membership(const CoeffMap& d, Membership kind, double tol,
                                          std::size_t max_listed = 32) {
  MembershipReport rep;
  const std::size_t n = d.max_len();
  const std::size_t size = d.alphabet().size();
  const Complex expected_empty = kind == Membership::group ? 1.0 : 0.0;
  const double empty_residual = std::abs(d.empty_coeff() - expected_empty);
  rep.max_residual = empty_residual;
  if (empty_residual > tol) {
    rep.ok = false;
    ++rep.violation_count;
    rep.violations.push_back({Word{}, Word{}, empty_residual});
  }
  for (std::size_t lu = 1; lu < n; ++lu) {
    for_each_word_of_length(size, lu, [&](const Word& u) {
      for (std::size_t lv = lu; lu + lv <= n; ++lv) {
        for_each_word_of_length(size, lv, [&](const Word& v) {
          if (v < u) return;
          Complex s{};
          for (const auto& [w, mult] : shuffle(u, v)) s += static_cast<double>(mult) * d[w];
          if (kind == Membership::group) s -= d[u] * d[v];
          const double r = std::abs(s);
          ++rep.pairs_checked;
          rep.max_residual = std::max(rep.max_residual, r);
          if (r > tol) {
            rep.ok = false;
            ++rep.violation_count;
            if (rep.violations.size() < max_listed) rep.violations.push_back({u, v, r});
          }
        });
      }
    });
  }
  return rep;
}

}  // namespace wordseries
