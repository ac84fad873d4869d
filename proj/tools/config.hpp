#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "wordseries/wordseries.hpp"

namespace cli {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Number kept together with the decimal text it was read from.
struct Number {
  double value = 0;
  std::string text;

  static Number parse(const std::string& s, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
      throw ConfigError("invalid number for '" + key + "': '" + s + "'");
    return {v, s};
  }
  static Number of(double v) { return {v, fmt(v)}; }
};

struct RunConfig {
  std::string system = "fpu5";
  std::string scheme = "strang";
  std::vector<Number> scheme_a, scheme_b;  // explicit lists override the name
  std::size_t N = 2;
  std::optional<Number> h;
  Number h_min = Number::parse("1e-3", "h_min");
  Number h_max = Number::parse("1", "h_max");
  std::size_t h_points = 200;
  std::size_t refine = 0;  // extra scan points around each first-order resonance
  Number T = Number::parse("50", "T");
  std::string out = "out";
  Number tol = Number::parse("1e-12", "tol");
  std::uint64_t seed = 1;
  std::string alphabet = "fundamental";  // or "modes"
  std::string processor = "full";         // or "first_order"
  std::size_t m = 1;

  Json to_json() const {
    Json j;
    j["system"] = system;
    if (scheme_a.empty()) {
      j["scheme"] = scheme;
    } else {
      Json a = Json::array(), b = Json::array();
      for (const auto& x : scheme_a) a.push_back(x.text);
      for (const auto& x : scheme_b) b.push_back(x.text);
      j["scheme"] = Json{{"a", a}, {"b", b}};
    }
    j["N"] = N;
    if (h) j["h"] = h->text;
    j["h_min"] = h_min.text;
    j["h_max"] = h_max.text;
    j["h_points"] = h_points;
    j["refine"] = refine;
    j["T"] = T.text;
    j["out"] = out;
    j["tol"] = tol.text;
    j["seed"] = seed;
    j["alphabet"] = alphabet;
    j["processor"] = processor;
    j["m"] = m;
    return j;
  }
};

// Key/value access shared by the TOML and JSON readers.
struct Source {
  virtual ~Source() = default;
  virtual bool has(const std::string& key) const = 0;
  virtual std::string text(const std::string& key) const = 0;  // scalar as written
  virtual std::vector<std::string> list(const std::string& key) const = 0;
  virtual bool is_table(const std::string& key) const = 0;
  virtual std::vector<std::string> keys() const = 0;
};

class JsonSource : public Source {
 public:
  explicit JsonSource(Json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw ConfigError("configuration must be an object");
  }
  bool has(const std::string& k) const override { return j_.contains(k); }
  std::string text(const std::string& k) const override { return scalar(j_.at(k), k); }
  std::vector<std::string> list(const std::string& k) const override { return list_of(j_.at(k), k); }
  bool is_table(const std::string& k) const override { return j_.at(k).is_object(); }
  std::vector<std::string> keys() const override {
    std::vector<std::string> out;
    for (const auto& [k, v] : j_.items()) out.push_back(k);
    return out;
  }
  const Json& sub(const std::string& k) const { return j_.at(k); }

  static std::string scalar(const Json& v, const std::string& k) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return v.dump();
    throw ConfigError("'" + k + "' must be a number or string");
  }
  static std::vector<std::string> list_of(const Json& v, const std::string& k) {
    if (!v.is_array()) throw ConfigError("'" + k + "' must be a list");
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(scalar(x, k));
    return out;
  }

 private:
  Json j_;
};

class TomlSource : public Source {
 public:
  explicit TomlSource(toml::table t) : t_(std::move(t)) {}
  bool has(const std::string& k) const override { return t_.contains(k); }
  std::string text(const std::string& k) const override { return scalar(*t_.get(k), k); }
  std::vector<std::string> list(const std::string& k) const override {
    const auto* arr = t_.get(k)->as_array();
    if (!arr) throw ConfigError("'" + k + "' must be a list");
    std::vector<std::string> out;
    for (const auto& x : *arr) out.push_back(scalar(x, k));
    return out;
  }
  bool is_table(const std::string& k) const override { return t_.get(k)->is_table(); }
  std::vector<std::string> keys() const override {
    std::vector<std::string> out;
    for (const auto& [k, v] : t_) out.emplace_back(k.str());
    return out;
  }
  TomlSource sub(const std::string& k) const { return TomlSource(*t_.get(k)->as_table()); }

  static std::string scalar(const toml::node& n, const std::string& k) {
    if (auto s = n.value<std::string>(); s && n.is_string()) return *s;
    if (n.is_integer()) return std::to_string(*n.value<std::int64_t>());
    if (n.is_floating_point()) return fmt(*n.value<double>());
    throw ConfigError("'" + k + "' must be a number or string");
  }

 private:
  toml::table t_;
};

inline std::size_t parse_count(const std::string& s, const std::string& key) {
  const Number n = Number::parse(s, key);
  if (n.value < 0 || n.value != std::floor(n.value) || n.value > 1e9)
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  return std::size_t(n.value);
}

inline void apply_scheme_lists(RunConfig& c, const std::vector<std::string>& a, const std::vector<std::string>& b) {
  c.scheme_a.clear();
  c.scheme_b.clear();
  for (const auto& x : a) c.scheme_a.push_back(Number::parse(x, "scheme.a"));
  for (const auto& x : b) c.scheme_b.push_back(Number::parse(x, "scheme.b"));
  c.scheme = "custom";
}

inline void apply(RunConfig& c, const Source& s) {
  static const std::vector<std::string> known{"system", "scheme", "N", "h", "h_min", "h_max", "h_points", "refine",
                                              "T", "out", "tol", "seed", "alphabet", "processor", "m"};
  for (const auto& k : s.keys())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown configuration key '" + k + "'");
  if (s.has("system")) c.system = s.text("system");
  if (s.has("scheme")) {
    if (s.is_table("scheme")) {
      if (auto* js = dynamic_cast<const JsonSource*>(&s)) {
        const auto& t = js->sub("scheme");
        apply_scheme_lists(c, JsonSource::list_of(t.at("a"), "scheme.a"), JsonSource::list_of(t.at("b"), "scheme.b"));
      } else {
        const auto t = dynamic_cast<const TomlSource&>(s).sub("scheme");
        if (!t.has("a") || !t.has("b")) throw ConfigError("scheme table needs lists 'a' and 'b'");
        apply_scheme_lists(c, t.list("a"), t.list("b"));
      }
    } else {
      c.scheme = s.text("scheme");
      c.scheme_a.clear();
      c.scheme_b.clear();
    }
  }
  if (s.has("N")) c.N = parse_count(s.text("N"), "N");
  if (s.has("h")) c.h = Number::parse(s.text("h"), "h");
  if (s.has("h_min")) c.h_min = Number::parse(s.text("h_min"), "h_min");
  if (s.has("h_max")) c.h_max = Number::parse(s.text("h_max"), "h_max");
  if (s.has("h_points")) c.h_points = parse_count(s.text("h_points"), "h_points");
  if (s.has("refine")) c.refine = parse_count(s.text("refine"), "refine");
  if (s.has("T")) c.T = Number::parse(s.text("T"), "T");
  if (s.has("out")) c.out = s.text("out");
  if (s.has("tol")) c.tol = Number::parse(s.text("tol"), "tol");
  if (s.has("seed")) c.seed = parse_count(s.text("seed"), "seed");
  if (s.has("alphabet")) c.alphabet = s.text("alphabet");
  if (s.has("processor")) c.processor = s.text("processor");
  if (s.has("m")) c.m = parse_count(s.text("m"), "m");
}

// TOML by default; JSON for .json files. A run manifest is accepted too and
// its recorded configuration is used.
inline void load_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (json) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const std::exception& e) {
      throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("command")) j = j.at("config");
    apply(c, JsonSource(std::move(j)));
    return;
  }
  try {
    apply(c, TomlSource(toml::parse(text, path)));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e;
    throw ConfigError("malformed TOML: " + os.str());
  }
}

// "fpu5", "forced_oscillator(omega, F)", "cubic_quartic(omega, eps)".
inline wordseries::MechanicalSystem make_system(const std::string& spec) {
  static const std::regex call(R"(\s*([a-z_0-9]+)\s*(?:\((.*)\))?\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, call)) throw ConfigError("unknown system preset '" + spec + "'");
  const std::string name = m[1];
  std::vector<double> args;
  if (m[2].matched) {
    std::stringstream ss(m[2].str());
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      args.push_back(Number::parse(item, name).value);
    }
  }
  auto need = [&](std::size_t n, std::vector<double> defaults) {
    if (args.empty()) args = std::move(defaults);
    if (args.size() != n) throw ConfigError("preset '" + name + "' takes " + std::to_string(n) + " arguments");
  };
  if (name == "fpu5") {
    need(0, {});
    return wordseries::presets::fpu5();
  }
  if (name == "forced_oscillator") {
    need(2, {1.0, 1.0});
    if (!(args[0] > 0)) throw ConfigError("forced_oscillator needs omega > 0");
    return wordseries::presets::forced_oscillator(args[0], args[1]);
  }
  if (name == "cubic_quartic") {
    need(2, {1.0, 0.1});
    if (!(args[0] > 0)) throw ConfigError("cubic_quartic needs omega > 0");
    return wordseries::presets::cubic_quartic(args[0], args[1]);
  }
  throw ConfigError("unknown system preset '" + spec + "'");
}

inline wordseries::SplittingScheme make_scheme(const RunConfig& c) {
  if (!c.scheme_a.empty() || !c.scheme_b.empty()) {
    std::vector<double> a, b;
    for (const auto& x : c.scheme_a) a.push_back(x.value);
    for (const auto& x : c.scheme_b) b.push_back(x.value);
    try {
      return wordseries::SplittingScheme(a, b, "custom");
    } catch (const wordseries::Error& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    return wordseries::SplittingScheme::named(c.scheme);
  } catch (const wordseries::Error&) {
    throw ConfigError("unknown scheme '" + c.scheme + "' (known: strang, lie_trotter, composition8)");
  }
}

// "a=0.5,0.5;b=1,0" on the command line.
inline void parse_scheme_flag(RunConfig& c, const std::string& s) {
  const auto semi = s.find(';');
  if (s.rfind("a=", 0) != 0 || semi == std::string::npos || s.compare(semi + 1, 2, "b=") != 0) {
    c.scheme = s;
    c.scheme_a.clear();
    c.scheme_b.clear();
    return;
  }
  auto split = [](const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  apply_scheme_lists(c, split(s.substr(2, semi - 2)), split(s.substr(semi + 3)));
}

inline void validate(const RunConfig& c) {
  make_system(c.system);
  const auto scheme = make_scheme(c);
  if (!scheme.consistent()) throw ConfigError("scheme coefficients must each sum to 1");
  if (c.N < 1 || c.N > 6) throw ConfigError("N must be between 1 and 6");
  if (c.h && c.h->value == 0) throw ConfigError("h must be nonzero");
  if (!(c.h_min.value > 0) || !(c.h_max.value > c.h_min.value)) throw ConfigError("need 0 < h_min < h_max");
  if (c.h_points < 2) throw ConfigError("h_points must be at least 2");
  if (!(c.T.value > 0)) throw ConfigError("T must be positive");
  if (!(c.tol.value > 0)) throw ConfigError("tol must be positive");
  if (c.alphabet != "fundamental" && c.alphabet != "modes") throw ConfigError("alphabet must be 'fundamental' or 'modes'");
  if (c.processor != "full" && c.processor != "first_order") throw ConfigError("processor must be 'full' or 'first_order'");
  if (c.m < 1) throw ConfigError("m must be at least 1");
}

}  // namespace cli
