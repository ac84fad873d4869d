// Modified equation of the Strang splitting for a forced harmonic oscillator,
// and what happens at the resonant step omega h = 2 pi.
#include <cmath>
#include <cstdio>

#include "wordseries/wordseries.hpp"

using namespace wordseries;

int main() {
  const double w = 1.3, F = 0.5;
  const auto sys = presets::forced_oscillator(w, F);
  const auto modes = sys.modes();
  const auto a = modes.alphabet();

  for (double h : {0.1, 0.6, 2.0}) {
    const auto me = modified_equation(SplittingScheme::strang(), sys.chart.freq, a, 1, h);
    std::printf("h = %.2f  beta~ = %.15f  (w h / (2 sin(w h / 2)) = %.15f)\n", h, me.beta_tilde[Word{0}].real(),
                w * h / (2 * std::sin(w * h / 2)));
  }

  const double h = 0.6;
  const auto me = modified_equation(SplittingScheme::strang(), sys.chart.freq, a, 1, h);
  const auto Hmod = modified_hamiltonian(ExtCoeff(to_cvector(sys.chart.freq.omega()), me.beta_tilde), modes, 1);
  const auto drift = observable_drift(sys, SplittingScheme::strang(), h, 1e4 * h,
                                      {{"H", polynomial_observable(sys.hamiltonian())},
                                       {"H_mod", polynomial_observable(Hmod)}});
  std::printf("10^4 steps at h = %.1f: max drift H %.3e, H_mod %.3e\n", h, max_abs(drift.observables[0]),
              max_abs(drift.observables[1]));

  try {
    modified_equation(SplittingScheme::strang(), sys.chart.freq, a, 1, kTwoPi / w);
  } catch (const ResonanceError& e) {
    std::printf("at w h = 2 pi: %s\n", e.what());
  }
  auto x = sys.x0;
  SplittingIntegrator(sys, SplittingScheme::strang()).step(x, kTwoPi / w);
  std::printf("one resonant step from (q, p) = (0, 1): p = %.15f, 1 - h F = %.15f\n", x[1], 1 - kTwoPi / w * F);
  return 0;
}
