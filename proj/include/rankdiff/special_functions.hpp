#pragma once

namespace rankdiff {

// Natural log of the Gamma function for x > 0 (Lanczos approximation,
// ~1e-14 relative error).  Self-contained so results do not depend on the
// host libm and concurrent calls are safe.
double log_gamma(double x);

// Digamma for x > 0; recurrence into the asymptotic regime.
double digamma(double x);

}  // namespace rankdiff
