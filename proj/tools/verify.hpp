#pragma once

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "wordseries/quadrature_oracle.hpp"
#include "wordseries/wordseries.hpp"

namespace cli {

struct Check {
  std::string suite;
  std::string name;
  double value = 0;
  double tol = 0;
  bool passed() const { return value <= tol; }
};

struct VerifyReport {
  std::string level;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

class Verifier {
 public:
  Verifier(std::uint64_t seed, bool full) : rng_(seed), seed_(seed), full_(full) {}

  VerifyReport run() {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.level = full_ ? "full" : "fast";
    r.seed = seed_;
    algebra(r);
    extended(r);
    coefficients(r);
    transforms(r);
    hamiltonian(r);
    if (full_) oracle(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

 private:
  using AlphabetPtr = wordseries::AlphabetPtr;
  using CoeffMap = wordseries::CoeffMap;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  wordseries::Complex cnum() { return {uniform(-1, 1), uniform(-1, 1)}; }

  AlphabetPtr alphabet(std::size_t letters) {
    std::vector<wordseries::Letter> ls;
    for (int k = -int(letters); ls.size() < letters; ++k)
      if (k != 0) ls.push_back(wordseries::Letter{k, k % 2});
    return wordseries::Alphabet::make(std::move(ls));
  }

  wordseries::FrequencySpec frequencies() { return wordseries::FrequencySpec({uniform(0.5, 1.5), uniform(1.5, 3.0)}); }

  CoeffMap letter(const AlphabetPtr& a, std::size_t id, std::size_t N) {
    CoeffMap e(a, N);
    e.set(wordseries::Word{wordseries::LetterId(id)}, 1.0);
    return e;
  }

  // Random Lie element: letters, brackets of pairs, brackets of triples.
  CoeffMap lie_element(const AlphabetPtr& a, std::size_t N) {
    using wordseries::bracket;
    CoeffMap b(a, N);
    const std::size_t n = a->size();
    for (std::size_t i = 0; i < n; ++i) b += letter(a, i, N) * cnum();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) b += bracket(letter(a, i, N), letter(a, j, N)) * (0.5 * cnum());
    for (int t = 0; t < 4; ++t) {
      const auto i = std::size_t(uniform(0, double(n))), j = std::size_t(uniform(0, double(n))),
                 k = std::size_t(uniform(0, double(n)));
      b += bracket(letter(a, i, N), bracket(letter(a, j, N), letter(a, k, N))) * (0.25 * cnum());
    }
    return b;
  }

  static double diff(const CoeffMap& x, const CoeffMap& y) { return wordseries::max_abs_diff(x, y); }

  void algebra(VerifyReport& r) {
    using namespace wordseries;
    const std::size_t N = full_ ? 4 : 3;
    const auto a = alphabet(full_ ? 5 : 3);
    const auto beta = lie_element(a, N);
    const auto g1 = exp_star(beta), g2 = exp_star(lie_element(a, N)), g3 = exp_star(lie_element(a, N));
    r.checks.push_back({"core", "lie element satisfies shuffle relations",
                        verify_membership(beta, Membership::algebra, 1e-12).max_residual, 1e-12});
    r.checks.push_back({"core", "exp of lie element is a character",
                        verify_membership(g1, Membership::group, 1e-12).max_residual, 1e-12});
    r.checks.push_back({"core", "log inverts exp", diff(log_star(g1), beta), 1e-12});
    r.checks.push_back({"core", "convolution is associative",
                        diff(convolve(convolve(g1, g2), g3), convolve(g1, convolve(g2, g3))), 1e-12});
    r.checks.push_back({"core", "unit is neutral", diff(convolve(CoeffMap::unit(a, N), g1), g1), 0.0});
    r.checks.push_back({"core", "inverse", diff(convolve(g1, star_inverse(g1)), CoeffMap::unit(a, N)), 1e-12});
  }

  void extended(VerifyReport& r) {
    using namespace wordseries;
    const std::size_t N = 3;
    const auto a = alphabet(3);
    const auto f = frequencies();
    auto rand_ext = [&] {
      return ExtCoeff(to_cvector(f.omega(), uniform(-1, 1)), exp_star(lie_element(a, N)));
    };
    const ExtCoeff x = rand_ext(), y = rand_ext(), z = rand_ext();
    const ExtCoeff l = big_star(big_star(x, y), z), rr = big_star(x, big_star(y, z));
    r.checks.push_back({"extended", "big star is associative", (l - rr).norm_inf(), 1e-12});
    r.checks.push_back({"extended", "big star inverse", (big_star(x, ext_inverse(x)) - ExtCoeff::unit(a, N)).norm_inf(),
                        1e-12});
    r.checks.push_back({"extended", "product stays in the group",
                        verify_membership(l.delta, Membership::group, 1e-12).max_residual, 1e-12});
  }

  void coefficients(VerifyReport& r) {
    using namespace wordseries;
    const std::size_t N = 3;
    const auto a = alphabet(full_ ? 5 : 3);
    const auto f = frequencies();
    const double h = uniform(0.2, 1.5);
    std::vector<double> as, bs;
    const std::size_t stages = 1 + std::size_t(uniform(0, 4));
    for (std::size_t j = 0; j < stages; ++j) {
      as.push_back(uniform(-0.5, 1));
      bs.push_back(uniform(-0.5, 1));
    }
    const SplittingScheme scheme(as, bs);
    const auto closed = splitting_coefficients(scheme, f, a, N, h);
    const auto composed = splitting_coefficients_by_composition(scheme, f, a, N, h);
    r.checks.push_back({"coeffs", "splitting formula matches composition", (closed - composed).norm_inf(), 1e-12});
    const auto alpha = flow_coefficients(f, a, N, h);
    r.checks.push_back({"coeffs", "flow coefficients are a character",
                        verify_membership(alpha, Membership::group, 1e-12).max_residual, 1e-12});
    r.checks.push_back({"coeffs", "flow of base field matches flow coefficients",
                        diff(field_flow(base_field(a, N), f, h), alpha), 1e-12});
    const auto strang = splitting_coefficients(SplittingScheme::strang(), f, a, N, h);
    r.checks.push_back({"coeffs", "splitting coefficients are a character",
                        verify_membership(strang.delta, Membership::group, 1e-12).max_residual, 1e-12});
  }

  void transforms(VerifyReport& r) {
    using namespace wordseries;
    const std::size_t N = full_ ? 4 : 3;
    const auto a = alphabet(3);
    const auto f = frequencies();
    const auto beta = base_field(a, N);
    const auto nf = normal_form(beta, f);
    r.checks.push_back({"transforms", "normal form conjugation residual", conjugation_residual(nf, beta, f), 1e-12});
    double osc = 0;
    for (const auto& [w, c] : nf.beta_hat.entries())
      if (is_oscillatory(w, *a, f)) osc = std::max(osc, std::abs(c));
    r.checks.push_back({"transforms", "normal form vanishes on oscillatory words", osc, 1e-12});
    const double t = uniform(0.1, 1.0);
    r.checks.push_back({"transforms", "flow factorization matches direct flow",
                        (flow_factorization(nf, f, t) - direct_flow(beta, f, t)).norm_inf(), 1e-10});
    const double h = uniform(0.2, 0.9);
    const auto me = modified_equation(SplittingScheme::strang(), f, a, N, h);
    const auto target = splitting_coefficients(SplittingScheme::strang(), f, a, N, h).delta;
    r.checks.push_back({"transforms", "modified equation reproduces the integrator",
                        diff(field_flow(me.beta_tilde, f, h), target), 1e-11});
    r.checks.push_back({"transforms", "modified field lies in the algebra",
                        verify_membership(me.beta_tilde, Membership::algebra, 1e-12).max_residual, 1e-12});
  }

  void hamiltonian(VerifyReport& r) {
    using namespace wordseries;
    const auto sys = presets::cubic_quartic(uniform(0.8, 1.6), 0.3);
    const auto modes = sys.modes();
    r.checks.push_back({"hamiltonian", "modes reconstruct the potential",
                        (modes.sum() - sys.potential).max_abs_coefficient(), 1e-13});
    const SplittingIntegrator integ(sys, SplittingScheme::strang());
    std::vector<double> x = sys.x0;
    const CompiledPolynomial h0(sys.harmonic());
    const double a0 = h0(x).real();
    integ.rotate(x, uniform(0.1, 3.0));
    r.checks.push_back({"hamiltonian", "harmonic flow conserves harmonic energy", std::abs(h0(x).real() - a0), 1e-13});
  }

  void oracle(VerifyReport& r) {
    using namespace wordseries;
    const std::size_t N = 3;
    const auto a = alphabet(3);
    const auto f = frequencies();
    const double h = uniform(0.3, 1.5);
    const auto alpha = flow_coefficients(f, a, N, h);
    double worst = 0;
    for_each_word(a->size(), N, [&](const Word& w) {
      if (!w.empty()) worst = std::max(worst, std::abs(alpha[w] - simplex_quadrature(w, *a, f, h)));
    });
    r.checks.push_back({"oracle", "flow coefficients match simplex quadrature", worst, 1e-9});
  }

  std::mt19937_64 rng_;
  std::uint64_t seed_;
  bool full_;
};

}  // namespace cli
