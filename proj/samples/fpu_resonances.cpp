// Strang energy error at T = 50 for the five-oscillator FPU chain around the
// first-order resonance h = 2 pi / 70, printed as CSV.
#include <cstdio>

#include "wordseries/wordseries.hpp"

using namespace wordseries;

int main() {
  const auto sys = presets::fpu5();
  std::vector<Letter> letters;
  for (int j = 0; j < 5; ++j)
    for (int s : {1, -1}) {
      std::vector<int> k(5, 0);
      k[std::size_t(j)] = s;
      letters.emplace_back(k);
    }
  const auto fundamental = Alphabet::make(letters);
  const auto res = detect_numerical_resonances(sys.chart.freq, *fundamental, 1, 0.08, 0.1);
  for (const auto& e : res.entries)
    std::printf("# resonance h = %.12f (mu = %g, j = %ld)\n", e.h, e.mu, e.j);

  const double hr = kTwoPi / 70;
  const auto grid = build_scan_grid(0.95 * hr, 1.05 * hr, 41);
  std::printf("h,energy_error\n");
  for (const auto& r : energy_error_scan(sys, SplittingScheme::strang(), grid, 50.0))
    std::printf("%.12f,%.6e\n", r.h, r.energy_error);
  return 0;
}
