#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace wordseries;
using testing_support::Rng;

namespace {

const Complex I(0, 1);

FrequencySpec omega2() { return FrequencySpec({1.0, std::numbers::sqrt2}); }

AlphabetPtr alphabet5() { return Alphabet::make({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}); }

double oscillatory_max(const CoeffMap& d, const FrequencySpec& f) {
  double m = 0;
  for (const auto& [w, c] : d.entries())
    if (is_oscillatory(w, d.alphabet(), f)) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST(NormalForm, SingleOscillatoryLetter) {
  const auto a = Alphabet::make({{1, 0}});
  const auto f = omega2();
  CoeffMap beta(a, 1);
  beta.set(Word{0}, Complex(0.4, 0.2));
  const auto nf = normal_form(beta, f);
  EXPECT_NEAR(std::abs(nf.kappa[Word{0}] - Complex(0.4, 0.2) / I), 0.0, 1e-16);
  EXPECT_EQ(nf.beta_hat[Word{0}], Complex{});
}

TEST(NormalForm, NonoscillatoryWordsKeepTheirCoefficients) {
  Rng rng(1);
  const auto a = alphabet5();
  const auto f = omega2();
  const auto beta = testing_support::random_lie(rng, a, 3);
  const auto nf = normal_form(beta, f);
  EXPECT_EQ(nf.beta_hat[Word{0}], beta[Word{0}]);
  ASSERT_EQ(nf.generators.size(), 3u);
  // At order 2 the coefficient of (1,-1) is the one produced by stage 1.
  const auto k1 = exp_star(nf.generators[0]);
  const auto after1 = convolve(convolve(k1, beta), exp_star(-nf.generators[0])) - convolve(apply_xi(f, k1), exp_star(-nf.generators[0]));
  EXPECT_NEAR(std::abs(nf.beta_hat[Word{1, 2}] - after1[Word{1, 2}]), 0.0, 1e-14);
}

TEST(NormalForm, NonresonantFrequenciesAverageAllAngles) {
  Rng rng(2);
  const auto a = alphabet5();
  const auto f = omega2();
  const auto nf = normal_form(testing_support::random_lie(rng, a, 4), f);
  for (const auto& [w, c] : nf.beta_hat.entries()) {
    const auto k = letter_sum(w, *a);
    EXPECT_TRUE(k[0] == 0 && k[1] == 0) << to_string(w, *a);
  }
}

TEST(NormalForm, Invariants) {
  Rng rng(3);
  const auto a = alphabet5();
  const FrequencySpec f({1.0, 2.0});  // resonant: 2 e_1 - e_2 has zero frequency
  for (std::size_t N : {2u, 3u, 4u}) {
    const auto beta = testing_support::random_lie(rng, a, N);
    const auto nf = normal_form(beta, f);
    EXPECT_LE(conjugation_residual(nf, beta, f), 1e-12);
    EXPECT_LE(oscillatory_max(nf.beta_hat, f), 0.0);
    EXPECT_EQ(apply_xi(f, nf.beta_hat).norm_inf(), 0.0);
    EXPECT_LE(verify_membership(nf.beta_hat, Membership::algebra, 1e-12).max_residual, 1e-12);
    EXPECT_LE(verify_membership(nf.kappa, Membership::group, 1e-12).max_residual, 1e-12);
    for (const auto& g : nf.generators) EXPECT_LE(verify_membership(g, Membership::algebra, 1e-12).max_residual, 1e-12);
  }
  EXPECT_THROW(normal_form(CoeffMap::unit(a, 2), f), Error);
}

TEST(ChangeOfVariables, IdentityNormalFormAndResidual) {
  Rng rng(4);
  const auto a = alphabet5();
  const auto f = omega2();
  const std::size_t N = 3;
  const auto beta = testing_support::random_lie(rng, a, N);
  EXPECT_LE(max_abs_diff(change_of_variables(beta, ExtCoeff::unit(a, N), f), beta), 1e-15);
  const auto nf = normal_form(beta, f);
  EXPECT_LE(max_abs_diff(change_of_variables(beta, ExtCoeff(CVector(2), nf.kappa), f), nf.beta_hat), 1e-12);
  const ExtCoeff e(CVector{rng.uniform(-1, 1), rng.uniform(-1, 1)}, testing_support::random_group(rng, a, N));
  const auto B = change_of_variables(beta, e, f);
  EXPECT_LE((convolve(B, e.delta) + apply_xi(f, e.delta) - convolve(e.delta, apply_Xi(e.v, beta))).norm_inf(), 1e-12);
  EXPECT_THROW(change_of_variables(beta, ExtCoeff(CVector(2), CoeffMap(a, N)), f), Error);
}

TEST(CommutingDecomposition, TrivialSumAndBracket) {
  Rng rng(5);
  const auto a = alphabet5();
  const auto f = omega2();
  const std::size_t N = 4;
  CoeffMap averaged(a, N);
  averaged.set(Word{0}, 0.7);
  averaged.set((Word{1, 2}), 0.3);
  averaged.set((Word{2, 1}), -0.3);
  const auto nf0 = normal_form(averaged, f);
  EXPECT_LE(max_abs_diff(nf0.kappa, CoeffMap::unit(a, N)), 0.0);
  const auto [r0, s0] = commuting_decomposition(nf0, f);
  EXPECT_EQ(r0.delta.norm_inf(), 0.0);
  EXPECT_LE(max_abs_diff(s0.delta, averaged), 1e-16);

  const auto beta = testing_support::random_lie(rng, a, N);
  const auto nf = normal_form(beta, f);
  const auto [rot, avg] = commuting_decomposition(nf, f);
  const auto sum = rot + avg;
  EXPECT_LE((sum - ExtCoeff(to_cvector(f.omega()), beta)).norm_inf(), 1e-12);
  EXPECT_LE(ext_bracket(rot, avg).norm_inf(), 1e-12);
}

TEST(FlowFactorization, TrivialCasesAndDirectFlow) {
  Rng rng(6);
  const auto a = alphabet5();
  const auto f = omega2();
  const std::size_t N = 3;
  const auto beta = testing_support::random_lie(rng, a, N);
  const auto nf = normal_form(beta, f);
  EXPECT_LE((flow_factorization(nf, f, 0.0) - ExtCoeff::unit(a, N)).norm_inf(), 1e-15);
  for (double t : {0.1, 1.0, 2.5}) EXPECT_LE((flow_factorization(nf, f, t) - direct_flow(beta, f, t)).norm_inf(), 1e-10);

  CoeffMap averaged(a, N);
  averaged.set(Word{0}, 0.7);
  averaged.set((Word{1, 2}), 0.3);
  averaged.set((Word{2, 1}), -0.3);
  const auto nfa = normal_form(averaged, f);
  const double t = 0.8;
  const ExtCoeff expected(to_cvector(f.omega(), t), exp_star(averaged * Complex(t)));
  EXPECT_LE((flow_factorization(nfa, f, t) - expected).norm_inf(), 1e-15);
}

TEST(ModifiedEquation, NonoscillatoryLettersAndStrangClosedForm) {
  const auto a = alphabet5();
  const auto f = omega2();
  const double h = 0.83;
  const auto me = modified_equation(SplittingScheme::strang(), f, a, 3, h);
  EXPECT_NEAR(std::abs(me.beta_tilde[Word{0}] - 1.0), 0.0, 1e-15);
  for (LetterId l = 1; l < 5; ++l) {
    const double mu = word_frequency(Word{l}, *a, f).mu;
    EXPECT_NEAR(std::abs(me.beta_tilde[Word{l}] - mu * h / (2 * std::sin(mu * h / 2))), 0.0, 1e-13);
  }
}

TEST(ModifiedEquation, RoundTripAndMembership) {
  Rng rng(7);
  const auto a = alphabet5();
  const auto f = omega2();
  for (int t = 0; t < 3; ++t) {
    std::vector<double> as, bs;
    for (int j = 0; j < 3; ++j) {
      as.push_back(rng.uniform(0, 1));
      bs.push_back(rng.uniform(0, 1));
    }
    const SplittingScheme sch(as, bs);
    const double h = rng.uniform(0.2, 0.9);
    const auto me = modified_equation(sch, f, a, 4, h);
    const auto target = splitting_coefficients(sch, f, a, 4, h).delta;
    EXPECT_LE(max_abs_diff(field_flow(me.beta_tilde, f, h), target), 1e-12);
    EXPECT_LE(verify_membership(me.beta_tilde, Membership::algebra, 1e-12).max_residual, 1e-11);
  }
}

TEST(ModifiedEquation, ResonanceRaisesStructuredError) {
  const auto a = Alphabet::make({{1}, {-1}});
  const FrequencySpec f({1.3});
  const double h = 2 * kTwoPi / 1.3;
  try {
    modified_equation(SplittingScheme::strang(), f, a, 2, h);
    FAIL() << "expected a resonance error";
  } catch (const ResonanceError& e) {
    EXPECT_EQ(e.word, Word{0});
    EXPECT_EQ(e.j, 2);
    EXPECT_NE(std::string(e.what()).find("2*pi*2"), std::string::npos);
  }
  // Second-order resonance: mu = 2.6 and h = 2 pi / 2.6 is fine at one letter only.
  EXPECT_NO_THROW(modified_equation(SplittingScheme::strang(), f, a, 1, kTwoPi / 2.6));
  EXPECT_THROW(modified_equation(SplittingScheme::strang(), f, Alphabet::make({{1}, {2}}), 2, kTwoPi / 2.6),
               ResonanceError);
}

TEST(Processor, FirstOrderMatchesClosedFormAndModifiedSystem) {
  const auto a = Alphabet::make({{1}, {-1}});
  const double w = 1.3, h = 0.4;
  const FrequencySpec f({w});
  const auto p = processor(SplittingScheme::strang(), f, a, 2, h, ProcessorMode::first_order);
  const auto me = modified_equation(SplittingScheme::strang(), f, a, 2, h);
  for (LetterId l = 0; l < 2; ++l) {
    const double mu = l == 0 ? w : -w;
    const Complex At = std::exp(0.5 * I * mu * h);
    const Complex A = (std::exp(I * mu * h) - 1.0) / (I * mu * h);
    const Complex K = (At - A) / (std::exp(I * mu * h) - 1.0);
    EXPECT_NEAR(std::abs(p.kappa[Word{l}] - h * K), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(p.kappa[Word{l}] - (me.beta_tilde[Word{l}] - 1.0) / (I * mu)), 0.0, 1e-13);
    EXPECT_LE(std::abs(p.local_error.delta[Word{l}]), 1e-15);
  }
}

TEST(Processor, FullModeClearsShortOscillatoryWords) {
  const auto a = Alphabet::make({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const auto f = omega2();
  const auto p = processor(SplittingScheme::strang(), f, a, 2, 0.35, ProcessorMode::full);
  EXPECT_LE(oscillatory_max(p.local_error.delta, f), 1e-13);
  EXPECT_LE(p.local_error.vector_norm_inf(), 1e-15);
  EXPECT_LE(verify_membership(p.kappa, Membership::group, 1e-12).max_residual, 1e-12);
  // Conjugation identity: (h w, alpha^) * (0, kappa) = (0, kappa) * (h w, alpha~).
  const auto step = splitting_coefficients(SplittingScheme::strang(), f, a, 2, 0.35);
  const ExtCoeff k(CVector(2), p.kappa);
  EXPECT_LE((big_star(p.processed, k) - big_star(k, step)).norm_inf(), 1e-14);
}

TEST(Processor, ResonanceRaises) {
  const auto a = Alphabet::make({{1}, {-1}});
  const FrequencySpec f({1.0});
  EXPECT_THROW(processor(SplittingScheme::strang(), f, a, 1, kTwoPi, ProcessorMode::first_order), ResonanceError);
  EXPECT_THROW(processor(SplittingScheme::strang(), f, a, 1, kTwoPi, ProcessorMode::full), ResonanceError);
}
