#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "wordseries/word.hpp"

namespace wordseries {

// phi_h = P(b_r h) o U(a_r h) o ... o P(b_1 h) o U(a_1 h): stage j rotates by
// a_j h, then kicks by b_j h.
class SplittingScheme {
 public:
  SplittingScheme(std::vector<double> a, std::vector<double> b, std::string name = "custom")
      : a_(std::move(a)), b_(std::move(b)), name_(std::move(name)) {
    if (a_.empty() || a_.size() != b_.size()) throw Error("scheme needs r >= 1 matching a and b coefficients");
    for (std::size_t j = 0; j < a_.size(); ++j)
      if (!std::isfinite(a_[j]) || !std::isfinite(b_[j])) throw Error("scheme coefficients must be finite");
  }

  static SplittingScheme strang() { return {{0.5, 0.5}, {1.0, 0.0}, "strang"}; }
  static SplittingScheme lie_trotter() { return {{1.0}, {1.0}, "lie_trotter"}; }

  // Symmetric composition S(g1 h) S(g2 h) S(g1 h) raising the order of a
  // symmetric scheme of order p to p + 2.
  static SplittingScheme triple_jump(const SplittingScheme& base, int base_order) {
    const double e = 1.0 / (base_order + 1);
    const double g1 = 1.0 / (2.0 - std::pow(2.0, e));
    const double g2 = -std::pow(2.0, e) * g1;
    SplittingScheme s = base.scaled(g1).then(base.scaled(g2)).then(base.scaled(g1));
    s.name_ = base.name_ + "_tj" + std::to_string(base_order + 2);
    return s;
  }

  // Strang raised to order 8 by repeated triple jumps.
  static SplittingScheme composition8() {
    SplittingScheme s = strang();
    for (int p = 2; p < 8; p += 2) s = triple_jump(s, p);
    s.name_ = "composition8";
    return s;
  }

  static SplittingScheme named(const std::string& name) {
    if (name == "strang") return strang();
    if (name == "lie_trotter") return lie_trotter();
    if (name == "composition8") return composition8();
    throw Error("unknown scheme '" + name + "'");
  }

  std::size_t stages() const { return a_.size(); }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  const std::string& name() const { return name_; }
  double a_sum() const { return std::accumulate(a_.begin(), a_.end(), 0.0); }
  double b_sum() const { return std::accumulate(b_.begin(), b_.end(), 0.0); }
  bool consistent(double tol = 1e-14) const {
    return std::abs(a_sum() - 1) <= tol && std::abs(b_sum() - 1) <= tol;
  }
  std::vector<double> c() const {
    std::vector<double> c(a_.size());
    std::partial_sum(a_.begin(), a_.end(), c.begin());
    return c;
  }

  SplittingScheme scaled(double s) const {
    SplittingScheme r = *this;
    for (auto& x : r.a_) x *= s;
    for (auto& x : r.b_) x *= s;
    return r;
  }

  // This scheme followed by `next`; a kick-free stage merges into the
  // following rotation.
  SplittingScheme then(const SplittingScheme& next) const {
    std::vector<double> a = a_, b = b_;
    std::size_t start = 0;
    if (b.back() == 0.0) {
      a.back() += next.a_.front();
      b.back() = next.b_.front();
      start = 1;
    }
    a.insert(a.end(), next.a_.begin() + start, next.a_.end());
    b.insert(b.end(), next.b_.begin() + start, next.b_.end());
    return {std::move(a), std::move(b), name_ + "+" + next.name_};
  }

 private:
  std::vector<double> a_, b_;
  std::string name_;
};

}  // namespace wordseries
