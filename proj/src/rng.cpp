#include "rankdiff/rng.hpp"

#include "rankdiff/special_functions.hpp"

namespace rankdiff {

long long Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // multiplicative inversion
    const double limit = std::exp(-mean);
    long long k = 0;
    double p = uniform_pos();
    while (p > limit) {
      ++k;
      p *= uniform_pos();
    }
    return k;
  }
  // PTRS (Hormann 1993): transformed rejection, exact for large means.
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01() - 0.5;
    const double v = uniform_pos();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - log_gamma(k + 1.0)) {
      return static_cast<long long>(kf);
    }
  }
}

}  // namespace rankdiff
