#include <cmath>
#include <vector>

#include "doctest.h"
#include "rankdiff/asymptotics.hpp"
#include "rankdiff/core_types.hpp"

using namespace rankdiff;

// Reference values computed independently with mpmath at 50-digit working
// precision, then rounded to double.  psi uses the incomplete-gamma identity
// psi(eta, t) = e^{-t} + t^{2 eta} gamma_lower(1 - 2 eta, t); the moments
// integrate t^{p-1} e^{-t} / psi against that closed form.  (Quadrature on the
// raw x^{-2 eta - 1} singular integrand is NOT trustworthy here: tanh-sinh
// silently loses ~5e-9 at eta = 0.4 even at 50 digits.)
namespace oracle {
constexpr double psi_eta010_t1 = 1.20446081056167076474;
constexpr double psi_eta040_t1 = 4.718252779600906691187;
constexpr double psi_eta025_t05 = 1.462155051604782226777;
constexpr double psi_eta025_t1 = 1.861527706796296372394;
constexpr double psi_eta025_t3 = 3.075848429756496785209;
constexpr double moment_eta010_p1 = 0.8579954978311905717322;
constexpr double moment_eta025_p05 = 0.7732679119829239476964;
constexpr double moment_eta025_p1 = 0.6265075987671754490806;
constexpr double moment_eta025_p2 = 0.4564996053317903883682;
constexpr double moment_eta025_p5 = 0.2725852693739476353877;
constexpr double moment_eta040_p1 = 0.3442045521126035005488;
}  // namespace oracle

TEST_CASE("psi kernel matches high-precision reference values") {
  CHECK(std::abs(psi(0.10, 1.0) - oracle::psi_eta010_t1) <= 1e-10);
  CHECK(std::abs(psi(0.40, 1.0) - oracle::psi_eta040_t1) <= 1e-10);
  CHECK(std::abs(psi(0.25, 0.5) - oracle::psi_eta025_t05) <= 1e-10);
  CHECK(std::abs(psi(0.25, 1.0) - oracle::psi_eta025_t1) <= 1e-10);
  CHECK(std::abs(psi(0.25, 3.0) - oracle::psi_eta025_t3) <= 1e-10);
}

TEST_CASE("psi kernel equals one at t = 0 and increases in t") {
  for (double eta : {0.05, 0.25, 0.45}) {
    CHECK(psi(eta, 0.0) == 1.0);
    double prev = 1.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      const double cur = psi(eta, t);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("psi kernel agrees with a brute-force quadrature oracle") {
  // Simpson on the substitution x = u^16, which makes the integrand C^1 for
  // every eta below 0.45; deliberately different from the library's change of
  // variables so errors cannot cancel.
  auto brute = [](double eta, double t) {
    const int m = 16;
    const std::size_t panels = 40000;
    const double h = 1.0 / static_cast<double>(panels);
    auto f = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double x = std::pow(u, m);
      // -expm1, not 1 - exp: near u = 0 we need 1 - e^{-tx} ~ tx, and the
      // naive form underflows to zero once t*x drops below 1e-16, silently
      // deleting ~2e-3 of the integral at eta = 0.4.
      return -std::expm1(-t * x) * std::pow(x, -2.0 * eta - 1.0) * m *
             std::pow(u, m - 1);
    };
    double acc = f(0.0) + f(1.0);
    for (std::size_t i = 1; i < panels; ++i) {
      acc += f(h * static_cast<double>(i)) * ((i % 2 != 0) ? 4.0 : 2.0);
    }
    return 1.0 + 2.0 * eta * acc * h / 3.0;
  };
  for (double eta : {0.1, 0.25, 0.4}) {
    for (double t : {0.5, 1.0, 4.0}) {
      CHECK(std::abs(psi(eta, t) - brute(eta, t)) <= 1e-8 * brute(eta, t));
    }
  }
}

TEST_CASE("top-weight moments match high-precision reference values") {
  CHECK(std::abs(max_weight_moment(0.10, 1.0) - oracle::moment_eta010_p1) <= 1e-8);
  CHECK(std::abs(max_weight_moment(0.25, 0.5) - oracle::moment_eta025_p05) <= 1e-8);
  CHECK(std::abs(max_weight_moment(0.25, 1.0) - oracle::moment_eta025_p1) <= 1e-8);
  CHECK(std::abs(max_weight_moment(0.25, 2.0) - oracle::moment_eta025_p2) <= 1e-8);
  CHECK(std::abs(max_weight_moment(0.25, 5.0) - oracle::moment_eta025_p5) <= 1e-8);
  CHECK(std::abs(max_weight_moment(0.40, 1.0) - oracle::moment_eta040_p1) <= 1e-8);
}

TEST_CASE("top-weight moments decrease in p and stay inside (0, 1)") {
  double prev = 1.0;
  for (double p : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    const double m = max_weight_moment(0.25, p);
    CHECK(m > 0.0);
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("diversity limit evaluates its closed form") {
  // Gamma(p - 2 eta) / (Gamma(p) Gamma(1 - 2 eta)) against libm lgamma
  for (double eta : {0.05, 0.2, 0.25, 0.45}) {
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.5}) {
      if (p <= 2.0 * eta) continue;
      const double expect =
          std::exp(std::lgamma(p - 2.0 * eta) - std::lgamma(p) - std::lgamma(1.0 - 2.0 * eta));
      CHECK(std::abs(limit_dp(eta, p) - expect) <= 1e-12 * expect);
    }
  }
  CHECK(std::abs(limit_dp(0.25, 2.0) - 0.5) <= 1e-12);
  // Gamma(2.5) / (Gamma(3) Gamma(0.5)) = 0.375 by the half-integer recurrence
  CHECK(std::abs(limit_dp(0.25, 3.0) - 0.375) <= 1e-12);
}

TEST_CASE("diversity limit rejects out-of-domain arguments") {
  CHECK_THROWS_AS(limit_dp(0.25, 0.5), DomainError);   // p == 2 eta
  CHECK_THROWS_AS(limit_dp(0.25, 0.3), DomainError);   // p < 2 eta
  CHECK_THROWS_AS(limit_dp(0.25, 0.0), DomainError);
  CHECK_THROWS_AS(limit_dp(0.25, -1.0), DomainError);
  CHECK_THROWS_AS(limit_dp(0.0, 2.0), DomainError);
  CHECK_THROWS_AS(limit_dp(0.5, 2.0), DomainError);
  CHECK_THROWS_AS(limit_dp(-0.1, 2.0), DomainError);
  CHECK_THROWS_AS(limit_dp(0.7, 2.0), DomainError);
}

TEST_CASE("entropy limit hits 2 ln 2 at eta = 1/4") {
  CHECK(std::abs(limit_entropy(0.25) - 2.0 * std::log(2.0)) <= 1e-12);
}

TEST_CASE("entropy limit: digamma route and series route agree") {
  for (double eta : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45}) {
    const double a = limit_entropy(eta);
    const double b = limit_entropy_series(eta);
    CHECK(std::abs(a - b) <= 1e-9);
    CHECK(a > 0.0);
  }
}

TEST_CASE("entropy limit increases with eta") {
  // stronger pull toward Poisson-Dirichlet spreads the weights
  double prev = 0.0;
  for (double eta : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const double s = limit_entropy(eta);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("asymptotics functions reject bad eta and tolerances") {
  CHECK_THROWS_AS(psi(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(psi(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(psi(-0.2, 1.0), DomainError);
  CHECK_THROWS_AS(psi(0.25, -1.0), DomainError);
  CHECK_THROWS_AS(psi(0.25, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(max_weight_moment(0.6, 1.0), DomainError);
  CHECK_THROWS_AS(max_weight_moment(0.25, 0.0), DomainError);
  CHECK_THROWS_AS(max_weight_moment(0.25, 1.0, -1e-8), DomainError);
  CHECK_THROWS_AS(limit_entropy(0.5), DomainError);
  CHECK_THROWS_AS(limit_entropy(0.0), DomainError);
  CHECK_THROWS_AS(limit_entropy_series(0.25, 0.0), DomainError);
}
