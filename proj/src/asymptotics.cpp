#include "rankdiff/asymptotics.hpp"

#include <cmath>

#include "rankdiff/core_types.hpp"
#include "rankdiff/quadrature.hpp"
#include "rankdiff/special_functions.hpp"

namespace rankdiff {

namespace {

void validate_eta(double eta) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw DomainError("eta must lie in the open interval (0, 1/2)");
  }
}

// (1 - exp(-z)) / z, stable near zero
double one_minus_exp_over(double z) {
  if (z < 1e-8) return 1.0 - 0.5 * z;
  return -std::expm1(-z) / z;
}

}  // namespace

double psi(double eta, double t, double tol) {
  validate_eta(eta);
  if (!(t >= 0.0)) throw DomainError("psi: t must be >= 0");
  if (!(tol > 0.0)) throw DomainError("psi: tol must be > 0");
  if (t == 0.0) return 1.0;
  const double c = 1.0 / (1.0 - 2.0 * eta);
  // After x = u^c the integrand is c * t * (1 - e^(-t u^c)) / (t u^c):
  // smooth, bounded by c*t, no singularity left to resolve.
  const auto integrand = [&](double u) {
    const double x = std::pow(u, c);
    return c * t * one_minus_exp_over(t * x);
  };
  const double inner_tol = 0.5 * tol / (2.0 * eta);
  const double integral = integrate_adaptive(integrand, 0.0, 1.0, inner_tol);
  return 1.0 + 2.0 * eta * integral;
}

double max_weight_moment(double eta, double p, double tol) {
  validate_eta(eta);
  if (!(p > 0.0)) throw DomainError("max_weight_moment: p must be > 0");
  if (!(tol > 0.0)) throw DomainError("max_weight_moment: tol must be > 0");

  const double log_gamma_p = log_gamma(p);
  // upper limit with a certified tail: for T >= 2(p-1) the Gamma-integrand tail
  // is below 2 T^(p-1) e^-T, and psi >= 1 only shrinks it
  double upper = std::max({50.0, p + 10.0 * std::sqrt(p), 2.0 * p});
  while (2.0 * std::exp((p - 1.0) * std::log(upper) - upper - log_gamma_p) > 0.1 * tol) {
    upper *= 1.5;
  }

  const double psi_tol = 0.5 * tol;    // psi >= 1, so |d(1/psi)| <= |d psi|
  const double outer_tol = 0.4 * tol;  // remaining budget after the tail share

  const auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp((p - 1.0) * std::log(t) - t - log_gamma_p);
  };
  const auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return density(t) / psi(eta, t, psi_tol);
  };

  double total = 0.0;
  double lower = 0.0;
  if (p < 1.0) {
    // t^(p-1) is singular at zero; substitute v = t^p on [0,1]
    const auto sub = [&](double v) {
      if (v <= 0.0) return 0.0;
      const double t = std::pow(v, 1.0 / p);
      return std::exp(-t - log_gamma_p) / (p * psi(eta, t, psi_tol));
    };
    total += integrate_adaptive(sub, 0.0, 1.0, 0.5 * outer_tol);
    lower = 1.0;
  }
  total += integrate_adaptive(integrand, lower, upper, p < 1.0 ? 0.5 * outer_tol : outer_tol);
  return total;
}

double limit_dp(double eta, double p) {
  validate_eta(eta);
  if (!(p > 0.0)) throw DomainError("limit_dp: p must be > 0");
  if (!(p > 2.0 * eta)) {
    throw DomainError("limit_dp: requires p > 2*eta (the limit diverges otherwise)");
  }
  return std::exp(log_gamma(p - 2.0 * eta) - log_gamma(p) - log_gamma(1.0 - 2.0 * eta));
}

double limit_entropy(double eta) {
  validate_eta(eta);
  return digamma(1.0) - digamma(1.0 - 2.0 * eta);
}

double limit_entropy_series(double eta, double tol) {
  validate_eta(eta);
  if (!(tol > 0.0)) throw DomainError("limit_entropy_series: tol must be > 0");
  const double a = 2.0 * eta;
  double partial = 0.0;
  double k = 1.0;
  for (;;) {
    partial += a / (k * (k - a));
    if (k >= 16.0) {
      // bracket the tail by integrals over [k, inf) and [k+1, inf);
      // both have the closed form log(x / (x - a)) evaluated at the endpoint
      const double hi = std::log(k / (k - a));
      const double lo = std::log((k + 1.0) / (k + 1.0 - a));
      if (hi - lo < tol) {
        return partial + 0.5 * (hi + lo);
      }
    }
    k += 1.0;
    if (k > 1e9) throw DomainError("limit_entropy_series: tolerance unreachable");
  }
}

}  // namespace rankdiff
