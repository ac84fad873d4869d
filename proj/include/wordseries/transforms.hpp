#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "wordseries/coeffs.hpp"

namespace wordseries {

struct NormalFormResult {
  CoeffMap kappa;                   // composite change of variables, in G
  CoeffMap beta_hat;                // normal form, zero on oscillatory words
  std::vector<CoeffMap> generators;  // generators[n-1] lives on n-letter words
};

// Stage n removes the oscillatory n-letter words with kappa_n = exp(lambda_n);
// successive substitutions compose as kappa = kappa_N * ... * kappa_1.
inline NormalFormResult normal_form(const CoeffMap& beta, const FrequencySpec& freq) {
  if (std::abs(beta.empty_coeff()) > 1e-12) throw Error("normal form needs an algebra element");
  const auto& alphabet = beta.alphabet_ptr();
  const std::size_t N = beta.max_len();
  const Complex i1(0, 1);
  CoeffMap current = beta;
  CoeffMap total = CoeffMap::unit(alphabet, N);
  std::vector<CoeffMap> gens;
  for (std::size_t n = 1; n <= N; ++n) {
    CoeffMap lambda(alphabet, N);
    CoeffMap keep(alphabet, N);
    for (const auto& [w, c] : current.entries()) {
      if (w.size() != n) continue;
      const auto f = word_frequency(w, *alphabet, freq);
      if (f.is_zero)
        keep.set(w, c);
      else
        lambda.set(w, c / (i1 * f.mu));
    }
    const CoeffMap kappa = exp_star(lambda);
    const CoeffMap kinv = exp_star(-lambda);
    CoeffMap next = convolve(convolve(kappa, current), kinv) - convolve(apply_xi(freq, kappa), kinv);
    // Words of length n are known in closed form; write them exactly.
    CoeffMap fixed(alphabet, N);
    for (const auto& [w, c] : next.entries())
      if (w.size() != n) fixed.set(w, c);
    fixed += keep;
    current = std::move(fixed);
    total = convolve(kappa, total);
    gens.push_back(std::move(lambda));
  }
  return {std::move(total), std::move(current), std::move(gens)};
}

// Infinity norm of xi_omega kappa + beta_hat * kappa - kappa * beta.
inline double conjugation_residual(const NormalFormResult& nf, const CoeffMap& beta, const FrequencySpec& freq) {
  return (apply_xi(freq, nf.kappa) + convolve(nf.beta_hat, nf.kappa) - convolve(nf.kappa, beta)).norm_inf();
}

// B with B * kappa = kappa * Xi_v beta - xi_omega kappa, for e = (v, kappa).
inline CoeffMap change_of_variables(const CoeffMap& beta, const ExtCoeff& e, const FrequencySpec& freq) {
  if (std::abs(e.delta.empty_coeff() - 1.0) > 1e-12) throw Error("change of variables needs a group element");
  const CoeffMap rhs = convolve(e.delta, apply_Xi(e.v, beta)) - apply_xi(freq, e.delta);
  return convolve(rhs, star_inverse(e.delta));
}

// (omega, beta) = (omega, kappa^-1 * xi_omega kappa) + (0, kappa^-1 * beta_hat * kappa).
inline std::pair<ExtCoeff, ExtCoeff> commuting_decomposition(const NormalFormResult& nf, const FrequencySpec& freq) {
  const CoeffMap kinv = star_inverse(nf.kappa);
  ExtCoeff rotation(to_cvector(freq.omega()), convolve(kinv, apply_xi(freq, nf.kappa)));
  ExtCoeff averaged(CVector(freq.dim()), convolve(convolve(kinv, nf.beta_hat), nf.kappa));
  return {std::move(rotation), std::move(averaged)};
}

// (0, kappa)^-1 * (t omega, exp(t beta_hat)) * (0, kappa).
inline ExtCoeff flow_factorization(const NormalFormResult& nf, const FrequencySpec& freq, double t) {
  const CVector zero(freq.dim());
  const ExtCoeff k(zero, nf.kappa);
  const ExtCoeff middle(to_cvector(freq.omega(), t), exp_star(nf.beta_hat * Complex(t)));
  return big_star(big_star(ext_inverse(k), middle), k);
}

// Direct flow (t omega, alpha(t)) of the field (omega, beta).
inline ExtCoeff direct_flow(const CoeffMap& beta, const FrequencySpec& freq, double t) {
  return {to_cvector(freq.omega(), t), field_flow(beta, freq, t)};
}

struct ModifiedEquation {
  CoeffMap beta_tilde;
  std::size_t n_max = 0;
  double h = 0;
  // Smallest |exp(i mu h) - 1| over oscillatory words, and where it occurs.
  double min_denominator = 0;
  std::optional<Word> closest_word;
};

namespace detail {

// Integral over 0 < s_1 < ... < s_m < h of exp(i (mu_1 s_1 + ... + mu_m s_m)),
// given the partial sums c_k = mu_1 + ... + mu_k. It is exp(i c_m h) times the
// (m, 0) entry of exp(h B), B lower bidiagonal with diagonal -i c_k and unit
// subdiagonal; scaling and squaring keeps close or equal c_k accurate.
inline Complex iterated_exp_integral(const std::vector<double>& partial, double h) {
  const Eigen::Index m = Eigen::Index(partial.size());
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  for (Eigen::Index k = 1; k <= m; ++k) {
    B(k, k) = Complex(0, -partial[std::size_t(k - 1)] * h);
    B(k, k - 1) = h;
  }
  const Eigen::MatrixXcd E = B.exp();
  return std::exp(Complex(0, partial.back() * h)) * E(m, 0);
}

}  // namespace detail

// Solves, word by word in order of length, for beta~ such that the flow of
// (omega, beta~) at time h reproduces the splitting coefficients alpha~(h).
// The flow coefficient of w sums, over splittings w = v_1 ... v_m, the product
// of beta~_{v_j} times an iterated exponential integral.
inline ModifiedEquation modified_equation(const SplittingScheme& scheme, const FrequencySpec& freq,
                                          const AlphabetPtr& alphabet, std::size_t N, double h,
                                          double resonance_tol = 1e-9) {
  if (h == 0) throw Error("modified equation needs h != 0");
  const CoeffMap target = splitting_coefficients(scheme, freq, alphabet, N, h).delta;
  const Complex i1(0, 1);
  ModifiedEquation out{CoeffMap(alphabet, N), N, h, INFINITY, std::nullopt};
  std::vector<double> prefix_mu;
  std::vector<double> partial;
  for (std::size_t n = 1; n <= N; ++n) {
    for_each_word_of_length(alphabet->size(), n, [&](const Word& w) {
      prefix_mu.assign(n + 1, 0.0);
      for (std::size_t i = 1; i <= n; ++i) {
        const auto pf = word_frequency(w.prefix(i), *alphabet, freq);
        prefix_mu[i] = pf.is_zero ? 0.0 : pf.mu;
      }
      // Splittings into at least two pieces: bit i of `cuts` set means a cut after letter i + 1.
      Complex rest = 0;
      for (std::uint32_t cuts = 1; cuts < (1u << (n - 1)); ++cuts) {
        Complex prod = 1;
        partial.clear();
        std::size_t begin = 0;
        for (std::size_t i = 1; i <= n && prod != Complex{}; ++i) {
          if (i < n && !((cuts >> (i - 1)) & 1u)) continue;
          Word v;
          for (std::size_t j = begin; j < i; ++j) v.push_back(w[j]);
          prod *= out.beta_tilde[v];
          partial.push_back(prefix_mu[i]);
          begin = i;
        }
        if (prod != Complex{}) rest += prod * detail::iterated_exp_integral(partial, h);
      }
      const auto f = word_frequency(w, *alphabet, freq);
      Complex one_word;  // int_0^h exp(i mu s) ds
      if (f.is_zero) {
        one_word = h;
      } else {
        const Complex denom = std::exp(i1 * f.mu * h) - 1.0;
        if (std::abs(denom) < out.min_denominator) {
          out.min_denominator = std::abs(denom);
          out.closest_word = w;
        }
        if (numerically_resonant(f.mu, h, resonance_tol))
          throw ResonanceError(w, to_string(w, *alphabet), f.mu, h, std::lround(f.mu * h / kTwoPi));
        one_word = detail::iterated_exp_integral({f.mu}, h);
      }
      out.beta_tilde.set(w, (target[w] - rest) / one_word);
    });
  }
  return out;
}

enum class ProcessorMode { first_order, full };

struct ProcessorResult {
  CoeffMap kappa;       // processor in G
  ExtCoeff processed;   // (h omega, alpha^(h)) = (0,kappa) * (h omega, alpha~) * (0,kappa)^-1
  ExtCoeff exact;       // (h omega, alpha(h))
  ExtCoeff local_error;  // processed - exact
};

inline ExtCoeff conjugate_by(const CoeffMap& kappa, const ExtCoeff& e) {
  const CVector zero(e.v.size());
  const ExtCoeff k(zero, kappa);
  return big_star(big_star(k, e), ext_inverse(k));
}

// first_order: kappa = exp(lambda) with lambda_k = h (A~_k - A_k)/(exp(i mu h) - 1)
// on oscillatory letters. full: kappa = K0^-1 * K~, where K~ normalizes the
// modified field and K0 normalizes the field being integrated.
inline ProcessorResult processor(const SplittingScheme& scheme, const FrequencySpec& freq,
                                 const AlphabetPtr& alphabet, std::size_t N, double h, ProcessorMode mode,
                                 double resonance_tol = 1e-9) {
  const ExtCoeff step = splitting_coefficients(scheme, freq, alphabet, N, h);
  ExtCoeff exact(to_cvector(freq.omega(), h), flow_coefficients(freq, alphabet, N, h));
  CoeffMap kappa(alphabet, N);
  if (mode == ProcessorMode::first_order) {
    const Complex i1(0, 1);
    CoeffMap lambda(alphabet, N);
    for (std::size_t a = 0; a < alphabet->size(); ++a) {
      const Word w{static_cast<LetterId>(a)};
      const auto f = word_frequency(w, *alphabet, freq);
      if (f.is_zero) continue;
      if (numerically_resonant(f.mu, h, resonance_tol))
        throw ResonanceError(w, to_string(w, *alphabet), f.mu, h, std::lround(f.mu * h / kTwoPi));
      lambda.set(w, (step.delta[w] - exact.delta[w]) / (std::exp(i1 * f.mu * h) - 1.0));
    }
    kappa = exp_star(lambda);
  } else {
    const auto modified = modified_equation(scheme, freq, alphabet, N, h, resonance_tol);
    const auto nf_mod = normal_form(modified.beta_tilde, freq);
    const auto nf_base = normal_form(base_field(alphabet, N), freq);
    kappa = convolve(star_inverse(nf_base.kappa), nf_mod.kappa);
  }
  ExtCoeff processed = conjugate_by(kappa, step);
  ExtCoeff err = processed - exact;
  return {std::move(kappa), std::move(processed), std::move(exact), std::move(err)};
}

}  // namespace wordseries
