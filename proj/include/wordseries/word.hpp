#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wordseries {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LetterId = std::uint16_t;
inline constexpr std::size_t kMaxWordLength = 10;

// A letter is an integer multi-index k in Z^d.
class Letter {
 public:
  Letter() = default;
  explicit Letter(std::vector<int> k) : k_(std::move(k)) {}
  Letter(std::initializer_list<int> k) : k_(k) {}

  std::size_t dim() const { return k_.size(); }
  int operator[](std::size_t j) const { return k_[j]; }
  const std::vector<int>& index() const { return k_; }

  auto operator<=>(const Letter&) const = default;

 private:
  std::vector<int> k_;
};

inline std::string to_string(const Letter& l) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < l.dim(); ++j) os << (j ? "," : "") << l[j];
  os << ')';
  return os.str();
}

// Finite, ordered letter set. Words store positions into this list.
class Alphabet {
 public:
  explicit Alphabet(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw Error("alphabet must contain at least one letter");
    if (letters_.size() > 0xFFFF) throw Error("alphabet too large");
    dim_ = letters_.front().dim();
    if (dim_ == 0) throw Error("letters must have dimension >= 1");
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (letters_[i].dim() != dim_) throw Error("letters of mixed dimension");
      if (!ids_.emplace(letters_[i], static_cast<LetterId>(i)).second)
        throw Error("duplicate letter " + to_string(letters_[i]));
    }
  }

  static std::shared_ptr<const Alphabet> make(std::vector<Letter> letters) {
    return std::make_shared<const Alphabet>(std::move(letters));
  }

  // Opaque letters 0..n-1 for pure algebra work.
  static std::shared_ptr<const Alphabet> abstract(std::size_t n) {
    std::vector<Letter> ls;
    for (std::size_t i = 0; i < n; ++i) ls.push_back(Letter{static_cast<int>(i)});
    return make(std::move(ls));
  }

  std::size_t size() const { return letters_.size(); }
  std::size_t dim() const { return dim_; }
  const Letter& letter(LetterId id) const { return letters_.at(id); }
  const std::vector<Letter>& letters() const { return letters_; }

  bool contains(const Letter& l) const { return ids_.count(l) != 0; }
  LetterId id_of(const Letter& l) const {
    auto it = ids_.find(l);
    if (it == ids_.end()) throw Error("letter " + to_string(l) + " not in alphabet");
    return it->second;
  }

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

 private:
  std::vector<Letter> letters_;
  std::map<Letter, LetterId> ids_;
  std::size_t dim_ = 0;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// Sequence of letter ids with inline storage. Ordered by length, then
// lexicographically by letter id.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<LetterId> ids) {
    for (auto id : ids) push_back(id);
  }
  explicit Word(std::span<const LetterId> ids) {
    for (auto id : ids) push_back(id);
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  LetterId operator[](std::size_t i) const { return ids_[i]; }
  const LetterId* begin() const { return ids_.data(); }
  const LetterId* end() const { return ids_.data() + size_; }

  void push_back(LetterId id) {
    if (size_ == kMaxWordLength) throw Error("word length exceeds storage limit");
    ids_[size_++] = id;
  }

  Word prefix(std::size_t n) const { return Word(std::span<const LetterId>(ids_.data(), n)); }
  Word suffix_from(std::size_t i) const {
    return Word(std::span<const LetterId>(ids_.data() + i, size_ - i));
  }

  friend Word concat(const Word& a, const Word& b) {
    if (a.size_ + b.size_ > kMaxWordLength) throw Error("word length exceeds storage limit");
    Word r = a;
    std::copy(b.begin(), b.end(), r.ids_.begin() + a.size_);
    r.size_ = static_cast<std::uint8_t>(a.size_ + b.size_);
    return r;
  }

  bool operator==(const Word& o) const {
    return size_ == o.size_ && std::equal(begin(), end(), o.begin());
  }
  std::strong_ordering operator<=>(const Word& o) const {
    if (auto c = size_ <=> o.size_; c != 0) return c;
    return std::lexicographical_compare_three_way(begin(), end(), o.begin(), o.end());
  }

 private:
  std::array<LetterId, kMaxWordLength> ids_{};
  std::uint8_t size_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull ^ w.size();
    for (auto id : w) h = (h ^ id) * 1099511628211ull;
    return h;
  }
};

// Multiset of words, all of one length, with positive multiplicities.
using WordSum = std::map<Word, std::size_t>;

namespace detail {
inline void shuffle_into(const Word& a, std::size_t i, const Word& b, std::size_t j, Word& acc,
                         WordSum& out) {
  if (i == a.size() && j == b.size()) {
    ++out[acc];
    return;
  }
  if (i < a.size()) {
    Word next = acc;
    next.push_back(a[i]);
    shuffle_into(a, i + 1, b, j, next, out);
  }
  if (j < b.size()) {
    Word next = acc;
    next.push_back(b[j]);
    shuffle_into(a, i, b, j + 1, next, out);
  }
}
}  // namespace detail

inline WordSum shuffle(const Word& a, const Word& b) {
  WordSum out;
  Word acc;
  detail::shuffle_into(a, 0, b, 0, acc, out);
  return out;
}

inline std::vector<std::pair<Word, Word>> deconcatenations(const Word& w) {
  std::vector<std::pair<Word, Word>> out;
  out.reserve(w.size() + 1);
  for (std::size_t i = 0; i <= w.size(); ++i) out.emplace_back(w.prefix(i), w.suffix_from(i));
  return out;
}

// Calls f(word) for every word of length exactly n, in word order.
template <class F>
void for_each_word_of_length(std::size_t alphabet_size, std::size_t n, F&& f) {
  std::vector<LetterId> ids(n, 0);
  while (true) {
    f(Word(std::span<const LetterId>(ids)));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++ids[pos] < alphabet_size) break;
      ids[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

template <class F>
void for_each_word(std::size_t alphabet_size, std::size_t max_len, F&& f) {
  for (std::size_t n = 0; n <= max_len; ++n) for_each_word_of_length(alphabet_size, n, f);
}

inline std::vector<int> letter_sum(const Word& w, const Alphabet& alphabet) {
  std::vector<int> k(alphabet.dim(), 0);
  for (auto id : w) {
    const auto& l = alphabet.letter(id);
    for (std::size_t j = 0; j < k.size(); ++j) k[j] += l[j];
  }
  return k;
}

inline std::string to_string(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "()";
  std::string s;
  for (auto id : w) s += to_string(alphabet.letter(id));
  return s;
}

}  // namespace wordseries
