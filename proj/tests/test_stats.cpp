#include <cmath>
#include <vector>

#include "doctest.h"
#include "rankdiff/rng.hpp"
#include "rankdiff/stats.hpp"

using namespace rankdiff;

TEST_CASE("mean variance and standard error on hand values") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(xs) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(std_error(xs) == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-15));
  CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(sample_variance(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("median and quantiles interpolate") {
  CHECK(median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
  const std::vector<double> xs = {0.0, 10.0};
  CHECK(quantile(xs, 0.0) == doctest::Approx(0.0));
  CHECK(quantile(xs, 1.0) == doctest::Approx(10.0));
  CHECK(quantile(xs, 0.25) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quantile({1.0}, -0.1), std::invalid_argument);
}

TEST_CASE("two-sample ks on hand cases") {
  CHECK(ks_two_sample({1.0, 2.0}, {1.5}).statistic == doctest::Approx(0.5));
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}).statistic == doctest::Approx(0.0));
  CHECK(ks_two_sample({1.0, 2.0}, {5.0, 6.0}).statistic == doctest::Approx(1.0));
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("two-sample ks handles ties across samples") {
  // shared atoms advance both empirical cdfs together
  const auto r = ks_two_sample({1.0, 1.0, 2.0, 3.0}, {1.0, 2.0, 2.0, 3.0});
  CHECK(r.statistic == doctest::Approx(0.25));
}

TEST_CASE("one-sample ks against the uniform cdf") {
  const std::size_t n = 10;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = (double(i) + 0.5) / double(n);
  const auto r = ks_one_sample(xs, [](double x) { return x; });
  CHECK(r.statistic == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("kolmogorov tail matches frozen references") {
  CHECK(kolmogorov_tail(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_tail(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
  CHECK(kolmogorov_tail(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-8));
  CHECK(kolmogorov_tail(0.0) == doctest::Approx(1.0));
  CHECK(kolmogorov_tail(50.0) == doctest::Approx(0.0));
}

TEST_CASE("large equal samples from one law give a small ks statistic") {
  Rng rng(2718);
  std::vector<double> a(20000), b(20000);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal();
  const auto r = ks_two_sample(a, b);
  CHECK(r.statistic < 0.02);
  CHECK(r.p_value > 1e-4);
}

TEST_CASE("rejection threshold formula") {
  CHECK(ks_two_sample_threshold(0.001, 5000, 5000) ==
        doctest::Approx(0.038989492070408104).epsilon(1e-12));
  CHECK(ks_two_sample_threshold(0.05, 100, 200) ==
        doctest::Approx(std::sqrt(-std::log(0.025) / 2.0) * std::sqrt(300.0 / 20000.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS(ks_two_sample_threshold(0.0, 10, 10), std::invalid_argument);
}

TEST_CASE("line fit recovers exact affine data") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 10; ++i) {
    xs.push_back(0.5 * i);
    ys.push_back(3.0 * xs.back() - 2.0);
  }
  const LinearFit fit = fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("line fit degrades with noise and rejects degenerate x") {
  Rng rng(99);
  std::vector<double> xs, ys;
  for (int i = 0; i < 200; ++i) {
    xs.push_back(double(i));
    ys.push_back(2.0 * xs.back() + 40.0 * rng.normal());
  }
  const LinearFit fit = fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.2));
  CHECK(fit.r_squared < 1.0);
  CHECK(fit.r_squared > 0.5);
  CHECK_THROWS_AS(fit_line({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("bootstrap median stderr is on the right scale") {
  Rng rng(123);
  std::vector<double> xs(400);
  for (double& v : xs) v = rng.normal();
  Rng boot(456);
  const double se = bootstrap_median_stderr(xs, boot);
  // asymptotic median se for a unit normal at n=400 is about 0.0627
  CHECK(se > 0.03);
  CHECK(se < 0.12);
  // deterministic given the generator state
  Rng boot2(456);
  CHECK(bootstrap_median_stderr(xs, boot2) == doctest::Approx(se).epsilon(1e-15));
}
