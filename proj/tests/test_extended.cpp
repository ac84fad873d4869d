#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace wordseries;
using testing_support::Rng;

namespace {

FrequencySpec omega2() { return FrequencySpec({1.0, std::numbers::sqrt2}); }

AlphabetPtr alphabet2() { return Alphabet::make({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}}); }

ExtCoeff random_ext_group(Rng& rng, const AlphabetPtr& a, std::size_t N) {
  CVector v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
  return {v, testing_support::random_group(rng, a, N)};
}

ExtCoeff random_ext_algebra(Rng& rng, const AlphabetPtr& a, std::size_t N) {
  CVector v{rng.cnum(), rng.cnum()};
  return {v, testing_support::random_lie(rng, a, N)};
}

}  // namespace

TEST(WordFrequency, EmptyAndCancellingWords) {
  const auto a = alphabet2();
  const auto f = omega2();
  EXPECT_TRUE(word_frequency(Word{}, *a, f).is_zero);
  EXPECT_TRUE(word_frequency((Word{0, 1}), *a, f).is_zero);
  const auto w = word_frequency((Word{0, 2}), *a, f);
  EXPECT_FALSE(w.is_zero);
  EXPECT_NEAR(w.mu, 1 + std::numbers::sqrt2, 1e-15);
}

TEST(WordFrequency, FpuResonantModule) {
  const auto f = presets::fpu5_frequencies();
  ASSERT_TRUE(f.exact_form().has_value());
  EXPECT_TRUE(f.of({0, 1, -1, 0, 0}).is_zero);
  EXPECT_TRUE(f.of({0, 2, 0, 0, -1}).is_zero);
  EXPECT_FALSE(f.of({0, 0, 0, 1, -1}).is_zero);
  EXPECT_FALSE(f.of({1, 0, 0, 0, 0}).is_zero);
}

TEST(WordFrequency, ExactAndNumericPathsAgreeOnFpuWords) {
  const auto exact = presets::fpu5_frequencies();
  const FrequencySpec numeric(exact.omega());
  std::vector<Letter> ls{Letter{0, 0, 0, 0, 0}};
  for (int j = 0; j < 5; ++j) {
    std::vector<int> k(5, 0);
    k[std::size_t(j)] = 1;
    ls.emplace_back(k);
    k[std::size_t(j)] = -1;
    ls.emplace_back(k);
  }
  const auto a = Alphabet::make(ls);
  std::size_t words = 0, zero = 0;
  for_each_word(a->size(), 4, [&](const Word& w) {
    const auto e = word_frequency(w, *a, exact), n = word_frequency(w, *a, numeric);
    EXPECT_EQ(e.is_zero, n.is_zero);
    if (!e.is_zero) {
      EXPECT_NEAR(e.mu, n.mu, 1e-12 * std::max(1.0, std::abs(n.mu)));
    } else {
      ++zero;
    }
    ++words;
  });
  EXPECT_GT(zero, 1u);
  EXPECT_EQ(words, 1u + 11u + 121u + 1331u + 14641u);
}

TEST(FrequencySpec, Validation) {
  EXPECT_THROW(FrequencySpec({}), Error);
  EXPECT_THROW(FrequencySpec({1.0, -2.0}), Error);
  ExactBasis bad{{"1"}, {1.0}, {{Rational(2)}}};
  EXPECT_THROW(FrequencySpec({1.0}, bad), Error);
  EXPECT_THROW(FrequencySpec({1.0, 2.0}).of({1}), Error);
}

TEST(ApplyXi, IdentityAndPhase) {
  Rng rng(1);
  const auto a = alphabet2();
  const auto d = testing_support::random_map(rng, a, 3, 1.0);
  EXPECT_EQ(max_abs_diff(apply_Xi(CVector{0.0, 0.0}, d), d), 0.0);
  CoeffMap single(a, 3);
  single.set(Word{0}, 2.5);
  const auto r = apply_Xi(CVector{std::numbers::pi, 0.3}, single);
  EXPECT_NEAR(std::abs(r[Word{0}] + 2.5), 0.0, 1e-15);
}

TEST(ApplyXi, IsConvolutionHomomorphism) {
  Rng rng(2);
  const auto a = alphabet2();
  const std::size_t N = 4;
  const CVector v{rng.cnum(), rng.cnum()};
  const auto g = testing_support::random_map(rng, a, N, rng.cnum());
  const auto d = testing_support::random_map(rng, a, N, rng.cnum());
  EXPECT_LE(max_abs_diff(apply_Xi(v, convolve(g, d)), convolve(apply_Xi(v, g), apply_Xi(v, d))), 1e-12);
}

TEST(ApplyXiSmall, DerivativeOfXiAndCommutation) {
  Rng rng(3);
  const auto a = alphabet2();
  const std::size_t N = 3;
  const CVector v{rng.uniform(-1, 1), rng.uniform(-1, 1)}, u{rng.cnum(), rng.cnum()};
  const auto d = testing_support::random_map(rng, a, N, 1.0);
  const double eps = 1e-5;
  CVector vp(2), vm(2);
  for (int j = 0; j < 2; ++j) {
    vp[std::size_t(j)] = eps * v[std::size_t(j)];
    vm[std::size_t(j)] = -eps * v[std::size_t(j)];
  }
  const auto fd = (apply_Xi(vp, d) - apply_Xi(vm, d)) * Complex(1.0 / (2 * eps));
  EXPECT_LE(max_abs_diff(fd, apply_xi(v, d)), 1e-8);
  EXPECT_EQ(apply_xi(v, d).empty_coeff(), Complex{});
  EXPECT_LE(max_abs_diff(apply_xi(v, apply_xi(u, d)), apply_xi(u, apply_xi(v, d))), 1e-13);
  CoeffMap zero_sum(a, N);
  zero_sum.set((Word{0, 1}), 1.0);
  zero_sum.set((Word{2, 3}), 1.0);
  EXPECT_EQ(apply_xi(v, zero_sum).norm_inf(), 0.0);
}

TEST(ApplyXiFrequency, AnnihilatesNonoscillatoryWords) {
  const auto a = alphabet2();
  const auto f = omega2();
  CoeffMap d(a, 3);
  d.set((Word{0, 1}), 1.0);
  d.set((Word{0, 2}), 1.0);
  const auto r = apply_xi(f, d);
  EXPECT_EQ((r[Word{0, 1}]), Complex{});
  EXPECT_NEAR(std::abs(r[Word{0, 2}] - Complex(0, 1 + std::numbers::sqrt2)), 0.0, 1e-15);
}

TEST(BigStar, UnitAndLieTrotter) {
  Rng rng(4);
  const auto a = alphabet2();
  const std::size_t N = 3;
  const auto e = random_ext_group(rng, a, N);
  const auto one = ExtCoeff::unit(a, N);
  EXPECT_EQ((big_star(one, e) - e).norm_inf(), 0.0);
  EXPECT_EQ((big_star(e, one) - e).norm_inf(), 0.0);
  const double h = 0.37;
  const auto f = omega2();
  const ExtCoeff rot(to_cvector(f.omega(), h), CoeffMap::unit(a, N));
  const ExtCoeff kick(CVector(2), taylor_coefficients(a, N, h));
  const auto lt = big_star(rot, kick);
  const ExtCoeff expected(to_cvector(f.omega(), h), apply_Xi(to_cvector(f.omega(), h), taylor_coefficients(a, N, h)));
  EXPECT_LE((lt - expected).norm_inf(), 1e-15);
}

TEST(BigStar, GroupAxioms) {
  Rng rng(5);
  const auto a = alphabet2();
  for (std::size_t N : {3u, 4u}) {
    const auto x = random_ext_group(rng, a, N), y = random_ext_group(rng, a, N), z = random_ext_group(rng, a, N);
    EXPECT_LE((big_star(big_star(x, y), z) - big_star(x, big_star(y, z))).norm_inf(), 1e-12);
    EXPECT_LE((big_star(x, ext_inverse(x)) - ExtCoeff::unit(a, N)).norm_inf(), 1e-12);
    EXPECT_LE((big_star(ext_inverse(x), x) - ExtCoeff::unit(a, N)).norm_inf(), 1e-12);
    EXPECT_LE(verify_membership(big_star(x, y).delta, Membership::group, 1e-12).max_residual, 1e-12);
  }
}

TEST(ExtInverse, Examples) {
  const auto a = alphabet2();
  const std::size_t N = 3;
  const auto one = ExtCoeff::unit(a, N);
  EXPECT_EQ((ext_inverse(one) - one).norm_inf(), 0.0);
  const ExtCoeff rot(CVector{0.4, -1.1}, CoeffMap::unit(a, N));
  const ExtCoeff back(CVector{-0.4, 1.1}, CoeffMap::unit(a, N));
  EXPECT_EQ((ext_inverse(rot) - back).norm_inf(), 0.0);
  Rng rng(6);
  const ExtCoeff k(CVector(2), testing_support::random_group(rng, a, N));
  EXPECT_LE((big_star(k, ext_inverse(k)) - one).norm_inf(), 1e-13);
  EXPECT_THROW(ext_inverse(ExtCoeff(CVector(2), CoeffMap(a, N))), Error);
}

TEST(ExtBracket, AbelianVectorsAntisymmetryAndRotation) {
  Rng rng(7);
  const auto a = alphabet2();
  const std::size_t N = 3;
  const ExtCoeff v1(CVector{1.0, 2.0}, CoeffMap(a, N)), v2(CVector{-0.5, 0.3}, CoeffMap(a, N));
  EXPECT_EQ(ext_bracket(v1, v2).norm_inf(), 0.0);
  const auto x = random_ext_algebra(rng, a, N), y = random_ext_algebra(rng, a, N);
  EXPECT_LE((ext_bracket(x, y) + ext_bracket(y, x)).norm_inf(), 1e-14);
  const auto f = omega2();
  const auto delta = testing_support::random_lie(rng, a, N);
  const auto r = ext_bracket(ExtCoeff(to_cvector(f.omega()), CoeffMap(a, N)), ExtCoeff(CVector(2), delta));
  EXPECT_EQ(r.vector_norm_inf(), 0.0);
  EXPECT_LE(max_abs_diff(r.delta, apply_xi(to_cvector(f.omega()), delta)), 1e-15);
  EXPECT_THROW(ext_bracket(ExtCoeff::unit(a, N), x), Error);
}

TEST(ExtBracket, Jacobi) {
  Rng rng(8);
  const auto a = alphabet2();
  const std::size_t N = 4;
  for (int t = 0; t < 3; ++t) {
    const auto x = random_ext_algebra(rng, a, N), y = random_ext_algebra(rng, a, N), z = random_ext_algebra(rng, a, N);
    const auto j = ext_bracket(ext_bracket(x, y), z) + ext_bracket(ext_bracket(y, z), x) + ext_bracket(ext_bracket(z, x), y);
    EXPECT_LE(j.norm_inf(), 1e-12);
  }
}

TEST(ExtPower, MatchesRepeatedProduct) {
  Rng rng(9);
  const auto a = alphabet2();
  const auto x = random_ext_group(rng, a, 3);
  EXPECT_EQ((ext_power(x, 0) - ExtCoeff::unit(a, 3)).norm_inf(), 0.0);
  EXPECT_LE((ext_power(x, 3) - big_star(x, big_star(x, x))).norm_inf(), 1e-13);
}

TEST(ExtCoeff, DimensionMismatchThrows) {
  const auto a = alphabet2();
  EXPECT_THROW(ExtCoeff(CVector(3), CoeffMap(a, 2)), Error);
}
