#pragma once

namespace rankdiff {

// Kernel psi_{2 eta}(t) = 1 + 2 eta * integral_0^1 (1 - exp(-t x)) x^(-2 eta - 1) dx,
// evaluated after the substitution x = u^(1/(1-2 eta)) which removes the endpoint
// singularity entirely.  Requires eta in (0, 1/2) and t >= 0.
double psi(double eta, double t, double tol = 1e-10);

// Limiting p-th moment of the top weight:
// (1/Gamma(p)) * integral_0^inf t^(p-1) e^-t / psi_{2 eta}(t) dt, p > 0.
// The absolute tolerance is split between the outer integral and the inner
// kernel evaluations; the upper limit carries a certified tail bound.
double max_weight_moment(double eta, double p, double tol = 1e-8);

// Limiting mean diversity index: Gamma(p - 2 eta) / (Gamma(p) Gamma(1 - 2 eta)).
// Throws DomainError when p <= 2 eta (the limit diverges there).
double limit_dp(double eta, double p);

// Limiting mean entropy 2 eta * sum_k 1/(k (k - 2 eta)), evaluated through the
// digamma identity (the sum telescopes against the harmonic series).
double limit_entropy(double eta);

// Same quantity by direct partial summation with an integral tail estimate;
// kept as an independent route for cross-validation.
double limit_entropy_series(double eta, double tol = 1e-12);

}  // namespace rankdiff
