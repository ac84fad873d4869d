#pragma once

#include <cmath>
#include <complex>
#include <map>

#include "wordseries/word.hpp"

namespace wordseries {

using Complex = std::complex<double>;

// Truncated coefficient map word -> complex. Absent words have coefficient 0.
class CoeffMap {
 public:
  using Entries = std::map<Word, Complex>;

  CoeffMap(AlphabetPtr alphabet, std::size_t max_len)
      : alphabet_(std::move(alphabet)), max_len_(max_len) {
    if (!alphabet_) throw Error("coefficient map needs an alphabet");
    if (max_len_ < 1 || max_len_ > kMaxWordLength) throw Error("truncation order out of range");
  }

  static CoeffMap zero(AlphabetPtr alphabet, std::size_t max_len) {
    return CoeffMap(std::move(alphabet), max_len);
  }
  static CoeffMap unit(AlphabetPtr alphabet, std::size_t max_len) {
    CoeffMap m(std::move(alphabet), max_len);
    m.set(Word{}, 1.0);
    return m;
  }

  const Alphabet& alphabet() const { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
  std::size_t max_len() const { return max_len_; }
  const Entries& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

  Complex operator[](const Word& w) const {
    auto it = entries_.find(w);
    return it == entries_.end() ? Complex{} : it->second;
  }
  Complex empty_coeff() const { return (*this)[Word{}]; }

  void set(const Word& w, Complex c) {
    check_word(w);
    if (c == Complex{})
      entries_.erase(w);
    else
      entries_[w] = c;
  }
  void add(const Word& w, Complex c) {
    check_word(w);
    if (c == Complex{}) return;
    auto [it, inserted] = entries_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) entries_.erase(it);
    }
  }

  bool compatible(const CoeffMap& o) const {
    return max_len_ == o.max_len_ && (alphabet_ == o.alphabet_ || *alphabet_ == *o.alphabet_);
  }
  void require_compatible(const CoeffMap& o) const {
    if (!compatible(o)) throw Error("coefficient maps differ in alphabet or truncation order");
  }

  // Words of length <= n kept, same truncation order.
  CoeffMap truncated(std::size_t n) const {
    CoeffMap r(alphabet_, max_len_);
    for (const auto& [w, c] : entries_)
      if (w.size() <= n) r.entries_.emplace(w, c);
    return r;
  }
  CoeffMap of_length(std::size_t n) const {
    CoeffMap r(alphabet_, max_len_);
    for (const auto& [w, c] : entries_)
      if (w.size() == n) r.entries_.emplace(w, c);
    return r;
  }

  template <class F>
  CoeffMap transformed(F&& f) const {
    CoeffMap r(alphabet_, max_len_);
    for (const auto& [w, c] : entries_) r.set(w, f(w, c));
    return r;
  }

  double norm_inf() const {
    double m = 0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.second));
    return m;
  }

  CoeffMap& operator+=(const CoeffMap& o) {
    require_compatible(o);
    for (const auto& [w, c] : o.entries_) add(w, c);
    return *this;
  }
  CoeffMap& operator-=(const CoeffMap& o) {
    require_compatible(o);
    for (const auto& [w, c] : o.entries_) add(w, -c);
    return *this;
  }
  CoeffMap& operator*=(Complex s) {
    if (s == Complex{}) {
      entries_.clear();
      return *this;
    }
    for (auto& e : entries_) e.second *= s;
    return *this;
  }
  friend CoeffMap operator+(CoeffMap a, const CoeffMap& b) { return a += b; }
  friend CoeffMap operator-(CoeffMap a, const CoeffMap& b) { return a -= b; }
  friend CoeffMap operator*(Complex s, CoeffMap a) { return a *= s; }
  friend CoeffMap operator*(CoeffMap a, Complex s) { return a *= s; }
  friend CoeffMap operator-(CoeffMap a) { return a *= -1.0; }

 private:
  void check_word(const Word& w) const {
    if (w.size() > max_len_) throw Error("word longer than truncation order");
    for (auto id : w)
      if (id >= alphabet_->size()) throw Error("letter id outside alphabet");
  }

  AlphabetPtr alphabet_;
  std::size_t max_len_;
  Entries entries_;
};

inline double max_abs_diff(const CoeffMap& a, const CoeffMap& b) {
  return (a - b).norm_inf();
}

}  // namespace wordseries
