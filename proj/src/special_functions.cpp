#include "rankdiff/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace rankdiff {

namespace {

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2*pi)/2

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i - 1.0);
  const double t = x + 6.5;  // g + 0.5
  return kHalfLogTwoPi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
  if (x < 0.5) {
    // reflection keeps the Lanczos core in its accurate range
    const double pi = 3.14159265358979323846;
    return std::log(pi / std::sin(pi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x must be > 0");
  double value = 0.0;
  while (x < 6.0) {
    value -= 1.0 / x;
    x += 1.0;
  }
  // asymptotic series with Bernoulli terms through x^-12
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  value += std::log(x) - 0.5 * inv;
  value -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
           inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
  return value;
}

}  // namespace rankdiff
