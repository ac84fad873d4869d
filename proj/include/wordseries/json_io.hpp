#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordseries/coeffs.hpp"
#include "wordseries/polynomial.hpp"
#include "wordseries/transforms.hpp"

namespace wordseries {

using Json = nlohmann::ordered_json;

inline Json to_json(const Letter& k) { return Json(k.index()); }

inline Letter letter_from_json(const Json& j) { return Letter(j.get<std::vector<int>>()); }

inline Json to_json(const Word& w, const Alphabet& a) {
  Json out = Json::array();
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(to_json(a.letter(w[i])));
  return out;
}

inline Word word_from_json(const Json& j, const Alphabet& a) {
  Word w;
  for (const auto& l : j) {
    const Letter k = letter_from_json(l);
    if (!a.contains(k)) throw Error("word letter " + to_string(k) + " is not in the alphabet");
    w.push_back(a.id_of(k));
  }
  return w;
}

inline Json to_json(const Alphabet& a) {
  Json out = Json::array();
  for (const auto& l : a.letters()) out.push_back(to_json(l));
  return out;
}

inline AlphabetPtr alphabet_from_json(const Json& j) {
  std::vector<Letter> letters;
  for (const auto& l : j) letters.push_back(letter_from_json(l));
  return Alphabet::make(std::move(letters));
}

inline Json complex_pair(Complex c) { return Json::array({c.real(), c.imag()}); }

// {alphabet, max_len, entries: [[letters, re, im], ...]}, entries in word order.
inline Json to_json(const CoeffMap& d) {
  Json entries = Json::array();
  for (const auto& [w, c] : d.entries()) entries.push_back(Json::array({to_json(w, d.alphabet()), c.real(), c.imag()}));
  return Json{{"alphabet", to_json(d.alphabet())}, {"max_len", d.max_len()}, {"entries", std::move(entries)}};
}

inline CoeffMap coeff_map_from_json(const Json& j) {
  CoeffMap d(alphabet_from_json(j.at("alphabet")), j.at("max_len").get<std::size_t>());
  for (const auto& e : j.at("entries"))
    d.add(word_from_json(e.at(0), d.alphabet()), Complex(e.at(1).get<double>(), e.at(2).get<double>()));
  return d;
}

inline Json to_json(const CVector& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(complex_pair(c));
  return out;
}

inline Json to_json(const ExtCoeff& e) { return Json{{"v", to_json(e.v)}, {"delta", to_json(e.delta)}}; }

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw Error("rational entries must be integers or \"p/q\" strings");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error("malformed rational '" + s + "'");
  }
}

// {omega: [..], basis: {symbols, values, rational_matrix}}.
inline Json to_json(const FrequencySpec& f) {
  Json out{{"omega", f.omega()}};
  if (const auto& ex = f.exact_form()) {
    Json m = Json::array();
    for (const auto& row : ex->matrix) {
      Json r = Json::array();
      for (const auto& q : row) r.push_back(to_string(q));
      m.push_back(std::move(r));
    }
    out["basis"] = Json{{"symbols", ex->symbols}, {"values", ex->values}, {"rational_matrix", std::move(m)}};
  }
  out["tolerance"] = f.tolerance();
  return out;
}

inline FrequencySpec frequency_from_json(const Json& j) {
  const double tol = j.contains("tolerance") ? j.at("tolerance").get<double>() : 1e-9;
  if (j.contains("basis")) {
    const auto& b = j.at("basis");
    ExactBasis basis;
    basis.symbols = b.at("symbols").get<std::vector<std::string>>();
    basis.values = b.at("values").get<std::vector<double>>();
    for (const auto& row : b.at("rational_matrix")) {
      std::vector<Rational> r;
      for (const auto& q : row) r.push_back(rational_from_json(q));
      basis.matrix.push_back(std::move(r));
    }
    FrequencySpec f = FrequencySpec::from_exact(std::move(basis), tol);
    if (j.contains("omega")) {
      const auto omega = j.at("omega").get<std::vector<double>>();
      if (omega.size() != f.dim()) throw Error("omega and basis disagree in dimension");
      for (std::size_t i = 0; i < omega.size(); ++i)
        if (std::abs(omega[i] - f[i]) > tol * std::max(1.0, std::abs(f[i])))
          throw Error("omega disagrees with its exact basis form");
    }
    return f;
  }
  return FrequencySpec(j.at("omega").get<std::vector<double>>(), std::nullopt, tol);
}

// {dof, terms: [[exponents, re, im], ...]}.
inline Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    std::vector<unsigned> e(p.nvars());
    for (std::size_t i = 0; i < p.nvars(); ++i) e[i] = m[i];
    terms.push_back(Json::array({e, c.real(), c.imag()}));
  }
  return Json{{"dof", p.dof()}, {"terms", std::move(terms)}};
}

inline Polynomial polynomial_from_json(const Json& j) {
  Polynomial p(j.at("dof").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    const auto e = t.at(0).get<std::vector<unsigned>>();
    if (e.size() != p.nvars()) throw Error("polynomial term has wrong number of exponents");
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) m.set(i, e[i]);
    p.add_term(m, Complex(t.at(1).get<double>(), t.at(2).get<double>()));
  }
  return p;
}

inline Json to_json(const MembershipReport& r, const Alphabet& a) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back(Json{{"u", to_json(x.first, a)}, {"v", to_json(x.second, a)}, {"residual", x.residual}});
  return Json{{"ok", r.ok},
              {"max_residual", r.max_residual},
              {"pairs_checked", r.pairs_checked},
              {"violation_count", r.violation_count},
              {"violations", std::move(v)}};
}

inline Json to_json(const ResonanceReport& r, const Alphabet& a) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"h", e.h},
                           {"mu", e.mu},
                           {"j", e.j},
                           {"order", e.order},
                           {"k", e.k},
                           {"word", to_json(e.word, a)},
                           {"coincident", e.coincident}});
  return Json{{"h_min", r.h_min}, {"h_max", r.h_max}, {"max_order", r.max_order}, {"resonances", std::move(entries)}};
}

inline Json to_json(const ResonanceError& e, const Alphabet& a) {
  return Json{{"error", "resonance"},
              {"word", to_json(e.word, a)},
              {"word_text", e.word_text},
              {"mu", e.mu},
              {"h", e.h},
              {"j", e.j},
              {"message", e.what()}};
}

}  // namespace wordseries
