#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace wordseries;
using testing_support::Rng;

namespace {

const Complex I(0, 1);

Polynomial random_poly(Rng& rng, std::size_t dof, unsigned degree, int terms) {
  Polynomial p(dof);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    unsigned left = degree;
    for (std::size_t v = 0; v < 2 * dof && left > 0; ++v) {
      const unsigned e = unsigned(rng.index(left + 1));
      m.set(v, e);
      left -= e;
    }
    p.add_term(m, rng.cnum());
  }
  return p;
}

std::vector<double> random_point(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-scale, scale);
  return x;
}

std::vector<Complex> rotate_complex(const Chart& chart, const std::vector<Complex>& v, const std::vector<double>& theta) {
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  re = harmonic_rotation(chart, re, theta);
  im = harmonic_rotation(chart, im, theta);
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

// Sum of beta_w f_w(x) over the support of beta.
std::vector<Complex> series_field(const CoeffMap& beta, const WordBasis& basis, std::span<const double> x) {
  std::vector<Complex> y(x.size());
  for (const auto& [w, c] : beta.entries()) {
    if (w.empty()) continue;
    const auto f = basis(w, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * f[i];
  }
  return y;
}

std::vector<Complex> to_complex(const std::vector<double>& x) { return {x.begin(), x.end()}; }

// y + sum over nonempty w of d_w f_w(y), with y possibly complex.
std::vector<Complex> apply_series(const CoeffMap& d, const WordBasis& basis, const std::vector<Complex>& y) {
  std::vector<Complex> out = y;
  for (const auto& [w, c] : d.entries()) {
    if (w.empty()) continue;
    const auto& f = basis.field(w);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * f[i](y);
  }
  return out;
}

PolyField series_poly_field(const CoeffMap& beta, const WordBasis& basis, std::size_t dof) {
  PolyField out(2 * dof, Polynomial(dof));
  for (const auto& [w, c] : beta.entries()) {
    const auto& f = basis.field(w);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i] * c;
  }
  return out;
}

}  // namespace

TEST(PoissonBracket, CanonicalRelations) {
  const std::size_t n = 3;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = poisson_bracket(Polynomial::q(n, i), Polynomial::p(n, j));
      EXPECT_EQ(b.coefficient(Monomial{}), Complex(i == j ? 1.0 : 0.0));
      EXPECT_TRUE(poisson_bracket(Polynomial::q(n, i), Polynomial::q(n, j)).is_zero());
    }
  EXPECT_THROW(poisson_bracket(Polynomial(1), Polynomial(2)), Error);
}

TEST(PoissonBracket, ActionsCommuteWithHarmonicPart) {
  const Chart chart = Chart::oscillators(FrequencySpec({1.0, std::numbers::sqrt2, 3.0}));
  const auto h = harmonic_hamiltonian(chart);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(poisson_bracket(h, action(chart, j)).max_abs_coefficient(), 1e-15);
}

TEST(PoissonBracket, AntisymmetryAndLeibniz) {
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    const auto A = random_poly(rng, 2, 3, 6), B = random_poly(rng, 2, 3, 6), C = random_poly(rng, 2, 3, 6);
    EXPECT_LE((poisson_bracket(A, B) + poisson_bracket(B, A)).max_abs_coefficient(), 1e-14);
    const auto lhs = poisson_bracket(A, B * C);
    const auto rhs = poisson_bracket(A, B) * C + B * poisson_bracket(A, C);
    EXPECT_LE((lhs - rhs).max_abs_coefficient(), 1e-13);
  }
}

TEST(FourierModes, ForcedOscillatorHasTwoModes) {
  const auto sys = presets::forced_oscillator(1.3, 0.5);
  const auto modes = sys.modes();
  ASSERT_EQ(modes.alphabet()->size(), 2u);
  EXPECT_TRUE(modes.alphabet()->contains(Letter{1}));
  EXPECT_TRUE(modes.alphabet()->contains(Letter{-1}));
  EXPECT_LE((modes.sum() - sys.potential).max_abs_coefficient(), 1e-16);
}

TEST(FourierModes, ReconstructionEigenIdentityAndConjugatePairs) {
  Rng rng(2);
  for (const auto& sys : {presets::cubic_quartic(1.3, 0.3), presets::fpu5()}) {
    const auto modes = sys.modes();
    EXPECT_LE((modes.sum() - sys.potential).max_abs_coefficient(), 1e-12) << sys.name;
    const auto& a = *modes.alphabet();
    const auto x = random_point(rng, 2 * sys.dof(), 0.5);
    EXPECT_NEAR(std::abs(modes.sum()(x) - sys.potential(x)), 0.0, 1e-12);
    std::vector<double> theta(sys.chart.freq.dim());
    for (auto& th : theta) th = rng.uniform(-3, 3);
    const auto rx = harmonic_rotation(sys.chart, x, theta);
    double worst = 0;
    for (LetterId l = 0; l < a.size(); ++l) {
      const auto& k = a.letter(l);
      double phase = 0;
      for (std::size_t j = 0; j < k.dim(); ++j) phase += k[j] * theta[j];
      const auto& Hk = modes.mode(l);
      worst = std::max(worst, std::abs(Hk(rx) - std::exp(I * phase) * Hk(x)));
      std::vector<int> neg(k.index());
      for (auto& v : neg) v = -v;
      ASSERT_TRUE(a.contains(Letter(neg)));
      EXPECT_LE((modes.mode(Letter(neg)) - Hk.conj()).max_abs_coefficient(), 1e-14);
    }
    EXPECT_LE(worst, 1e-10) << sys.name;
  }
}

TEST(FourierModes, FpuModesBoundedByDegree) {
  const auto modes = presets::fpu5().modes();
  EXPECT_EQ(modes.alphabet()->size(), 327u);
  for (const auto& k : modes.alphabet()->letters()) {
    int l1 = 0;
    for (std::size_t j = 0; j < k.dim(); ++j) {
      EXPECT_LE(std::abs(k[j]), 4);
      l1 += std::abs(k[j]);
    }
    EXPECT_LE(l1, 4);
  }
}

TEST(WordHamiltonian, OneAndTwoLetters) {
  const auto modes = presets::cubic_quartic(1.1, 0.4).modes();
  const WordHamiltonians H(modes);
  EXPECT_LE((H(Word{0}) - modes.mode(LetterId(0))).max_abs_coefficient(), 0.0);
  const auto h01 = H((Word{0, 1}));
  EXPECT_LE((h01 - poisson_bracket(modes.mode(LetterId(1)), modes.mode(LetterId(0))) * 0.5).max_abs_coefficient(), 1e-15);
  EXPECT_THROW(H(Word{}), Error);
}

TEST(WordHamiltonian, ForcedOscillatorMultiLetterWordsHaveNoField) {
  // Brackets of linear modes are constants: two letters give a constant, three give zero.
  const auto modes = presets::forced_oscillator(1.3, 0.5).modes();
  const WordHamiltonians H(modes);
  for_each_word(2, 3, [&](const Word& w) {
    if (w.size() < 2) return;
    for (const auto& c : hamiltonian_vector_field(H(w))) EXPECT_TRUE(c.is_zero());
    if (w.size() == 3) {
      EXPECT_TRUE(H(w).is_zero());
    }
  });
}

TEST(WordHamiltonian, FieldCorrespondenceAndPrintedOrderSign) {
  Rng rng(3);
  const auto sys = presets::cubic_quartic(1.1, 0.4);
  const auto modes = sys.modes();
  const auto a = modes.alphabet();
  const WordBasis basis(modes);
  const auto beta = testing_support::random_lie(rng, a, 3);
  const auto hf = hamiltonian_vector_field(modified_hamiltonian(beta, modes, 3));
  const auto x = random_point(rng, 2, 0.8);
  EXPECT_LE(testing_support::max_abs_diff(evaluate(hf, x), series_field(beta, basis, x)), 1e-11);

  // With brackets nested as {{H_k, H_l}, ...} the field has the opposite sign at two letters.
  const LetterId k = a->id_of(Letter{1}), l = a->id_of(Letter{-2});
  const auto b = bracket(testing_support::letter_element(a, k, 2), testing_support::letter_element(a, l, 2));
  const auto printed = poisson_bracket(modes.mode(k), modes.mode(l));  // = (H_kl - H_lk) in printed order
  const auto expected = series_field(b, basis, x);
  const auto got = evaluate(hamiltonian_vector_field(printed), x);
  std::vector<Complex> neg(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) neg[i] = -got[i];
  EXPECT_LE(testing_support::max_abs_diff(neg, expected), 1e-12);
  EXPECT_GT(testing_support::max_abs_diff(got, expected), 1e-3);
}

TEST(VectorField, SimpleFieldsAndDivergence) {
  const auto p = Polynomial::p(1, 0), q = Polynomial::q(1, 0);
  const auto f = hamiltonian_vector_field(p.pow(2) * 0.5);
  EXPECT_LE((f[0] - p).max_abs_coefficient(), 0.0);
  EXPECT_TRUE(f[1].is_zero());
  const auto g = hamiltonian_vector_field(harmonic_hamiltonian(Chart::oscillators(FrequencySpec({2.0}))));
  EXPECT_LE((g[0] - p).max_abs_coefficient(), 0.0);
  EXPECT_LE((g[1] + q * 4.0).max_abs_coefficient(), 0.0);
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto F = hamiltonian_vector_field(random_poly(rng, 2, 4, 8));
    Polynomial div(2);
    for (std::size_t i = 0; i < 4; ++i) div += F[i].derivative(i);
    EXPECT_LE(div.max_abs_coefficient(), 1e-14);
  }
}

TEST(WordBasis, OneLetterRotationIdentityAndFiniteDifferences) {
  Rng rng(5);
  const auto sys = presets::cubic_quartic(1.1, 0.4);
  const auto modes = sys.modes();
  const auto& a = *modes.alphabet();
  const WordBasis basis(modes);
  const auto x = random_point(rng, 2, 0.8);
  const auto f0 = basis(Word{0}, x);
  EXPECT_LE(testing_support::max_abs_diff(f0, evaluate(hamiltonian_vector_field(modes.mode(LetterId(0))), x)), 0.0);

  const std::vector<double> theta{rng.uniform(-3, 3)};
  const auto rx = harmonic_rotation(sys.chart, x, theta);
  double worst = 0;
  for_each_word(a.size(), 3, [&](const Word& w) {
    if (w.empty()) return;
    const double phase = letter_sum(w, a)[0] * theta[0];
    auto expected = rotate_complex(sys.chart, basis(w, x), theta);
    for (auto& v : expected) v *= std::exp(I * phase);
    worst = std::max(worst, testing_support::max_abs_diff(basis(w, rx), expected));
  });
  EXPECT_LE(worst, 1e-10);

  // f_{a w'} = (d f_{w'}) f_a with the Jacobian taken by central differences.
  const double eps = 1e-6;
  auto fd_field = [&](const Word& w) {
    const Word rest = w.suffix_from(1);
    const auto fa = basis(w.prefix(1), x);
    std::vector<Complex> out(2);
    for (std::size_t j = 0; j < 2; ++j) {
      auto xp = x, xm = x;
      xp[j] += eps;
      xm[j] -= eps;
      const auto dp = basis(rest, xp), dm = basis(rest, xm);
      for (std::size_t i = 0; i < 2; ++i) out[i] += (dp[i] - dm[i]) / (2 * eps) * fa[j];
    }
    return out;
  };
  for (const Word w : {Word{0, 1}, Word{2, 3, 1}, Word{4, 0, 5}})
    EXPECT_LE(testing_support::max_abs_diff(fd_field(w), basis(w, x)), 1e-6);
}

TEST(WordBasis, LieBracketCorrespondence) {
  Rng rng(6);
  const auto modes = presets::cubic_quartic(1.1, 0.4).modes();
  const auto a = modes.alphabet();
  const WordBasis basis(modes);
  CoeffMap b1(a, 2), b2(a, 2);
  for (LetterId l = 0; l < a->size(); ++l) {
    b1.set(Word{l}, rng.cnum());
    b2.set(Word{l}, rng.cnum());
  }
  const auto F1 = series_poly_field(b1, basis, 1), F2 = series_poly_field(b2, basis, 1);
  const auto J21 = jacobian_times(F2, F1), J12 = jacobian_times(F1, F2);
  PolyField comm;
  for (std::size_t i = 0; i < 2; ++i) comm.push_back(J21[i] - J12[i]);
  const auto x = random_point(rng, 2, 0.7);
  EXPECT_LE(testing_support::max_abs_diff(evaluate(comm, x), series_field(bracket(b1, b2), basis, x)), 1e-11);
}

TEST(WordBasis, SubstitutionRuleForcedOscillatorExact) {
  Rng rng(7);
  const auto modes = presets::forced_oscillator(1.3, 0.5).modes();
  const auto a = modes.alphabet();
  const std::size_t N = 3;
  const WordBasis basis(modes);
  const auto g = testing_support::random_group(rng, a, N), d = testing_support::random_group(rng, a, N);
  const auto x = random_point(rng, 2);
  const auto lhs = apply_series(d, basis, apply_series(g, basis, to_complex(x)));
  EXPECT_LE(testing_support::max_abs_diff(lhs, word_series_evaluate(convolve(g, d), modes, x, N)), 1e-14);
}

TEST(WordBasis, SubstitutionRuleConvergesWithTruncation) {
  Rng rng(8);
  const auto modes = presets::cubic_quartic(1.1, 0.4).modes();
  const auto a = modes.alphabet();
  const std::size_t N = 3;
  const WordBasis basis(modes);
  const auto lg = testing_support::random_lie(rng, a, N), ld = testing_support::random_lie(rng, a, N);
  const auto x = random_point(rng, 2, 0.5);
  std::vector<double> errs, scales{0.01, 0.02, 0.04};
  for (double s : scales) {
    const auto graded = [s](const Word& w, Complex c) { return c * std::pow(s, double(w.size())); };
    const auto g = exp_star(lg.transformed(graded)), d = exp_star(ld.transformed(graded));
    const auto lhs = apply_series(d, basis, apply_series(g, basis, to_complex(x)));
    errs.push_back(testing_support::max_abs_diff(lhs, word_series_evaluate(convolve(g, d), modes, x, N)));
  }
  // The truncated series differ by terms of order N + 1 in the scale.
  EXPECT_GT(fit_loglog_slope(scales, errs), double(N) + 0.7);
}

TEST(ModifiedHamiltonian, BaseElementReconstructsH) {
  const auto sys = presets::cubic_quartic(1.1, 0.4);
  const auto modes = sys.modes();
  const auto beta = base_field(modes.alphabet(), 3);
  EXPECT_LE((modified_hamiltonian(beta, modes, 3) - sys.potential).max_abs_coefficient(), 1e-15);
  const ExtCoeff e(to_cvector(sys.chart.freq.omega()), beta);
  EXPECT_LE((modified_hamiltonian(e, modes, 3) - sys.hamiltonian()).max_abs_coefficient(), 1e-15);
}

TEST(ModifiedHamiltonian, ForcedOscillatorStrangClosedForm) {
  const double w = 1.3, F = 0.5, h = 0.6;
  const auto sys = presets::forced_oscillator(w, F);
  const auto modes = sys.modes();
  const auto me = modified_equation(SplittingScheme::strang(), sys.chart.freq, modes.alphabet(), 2, h);
  const ExtCoeff e(to_cvector(sys.chart.freq.omega()), me.beta_tilde);
  const auto q = Polynomial::q(1, 0), p = Polynomial::p(1, 0);
  const double bt = w * h / (2 * std::sin(w * h / 2));
  const auto expected = p.pow(2) * 0.5 + q.pow(2) * (0.5 * w * w) - q * (bt * F);
  EXPECT_LE((modified_hamiltonian(e, modes, 1) - expected).max_abs_coefficient(), 1e-14);
  // Two-letter words only add a constant.
  const auto f2 = hamiltonian_vector_field(modified_hamiltonian(e, modes, 2) - expected);
  for (const auto& c : f2) EXPECT_LE(c.max_abs_coefficient(), 1e-14);
}

TEST(ModifiedHamiltonian, FpuValuesAreRealAlongTrajectory) {
  const auto sys = presets::fpu5();
  const auto modes = sys.modes();
  const double h = 0.5;
  const auto me = modified_equation(SplittingScheme::strang(), sys.chart.freq, modes.alphabet(), 2, h);
  const ExtCoeff e(to_cvector(sys.chart.freq.omega()), me.beta_tilde);
  const auto H1 = modified_hamiltonian(e, modes, 1), H2 = modified_hamiltonian(e, modes, 2);
  const auto rec = integrate_splitting(sys, SplittingScheme::strang(), h, 40, {}, 10);
  for (const auto& x : rec.states) {
    for (const auto* H : {&H1, &H2}) {
      const Complex v = (*H)(x);
      EXPECT_TRUE(std::isfinite(v.real()));
      EXPECT_LE(std::abs(v.imag()), 1e-9 * std::max(1.0, std::abs(v.real())));
    }
  }
}
