#include <cmath>
#include <vector>

#include "doctest.h"
#include "rankdiff/rng.hpp"
#include "rankdiff/stats.hpp"

using namespace rankdiff;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, double (Rng::*fn)()) {
  std::vector<double> out(n);
  for (double& v : out) v = (rng.*fn)();
  return out;
}

}  // namespace

TEST_CASE("substreams are reproducible and distinct") {
  Rng a = Rng::substream(123, 7);
  Rng b = Rng::substream(123, 7);
  Rng c = Rng::substream(123, 8);
  Rng d = Rng::substream(124, 7);
  bool same_ab = true, same_ac = true, same_ad = true;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    same_ab = same_ab && va == b.next_u64();
    same_ac = same_ac && va == c.next_u64();
    same_ad = same_ad && va == d.next_u64();
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
}

TEST_CASE("stream ids separate logical blocks") {
  CHECK(stream_id(0, 5) != stream_id(1, 5));
  CHECK(stream_id(0, 5) != stream_id(0, 6));
  CHECK(stream_id(2, 0) != stream_id(3, 0));
}

TEST_CASE("uniform ranges") {
  Rng rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("uniform moments") {
  Rng rng(31);
  const std::size_t n = 200000;
  auto xs = draw(rng, n, &Rng::uniform01);
  CHECK(mean(xs) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sample_variance(xs) == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("exponential moments") {
  Rng rng(32);
  const double rate = 2.5;
  const std::size_t n = 200000;
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.exponential(rate);
  const double m = 1.0 / rate;
  CHECK(mean(xs) == doctest::Approx(m).epsilon(4.0 / std::sqrt(double(n))));
  CHECK(sample_variance(xs) == doctest::Approx(m * m).epsilon(0.05));
  for (double v : xs) {
    CHECK(v > 0.0);
    if (!(v > 0.0)) break;
  }
}

TEST_CASE("normal moments") {
  Rng rng(33);
  const std::size_t n = 200000;
  auto xs = draw(rng, n, &Rng::normal);
  CHECK(std::abs(mean(xs)) < 4.0 / std::sqrt(double(n)));
  CHECK(sample_variance(xs) == doctest::Approx(1.0).epsilon(0.02));
  // symmetry: third central moment near zero relative to sd^3
  double skew = 0.0;
  for (double v : xs) skew += v * v * v;
  skew /= double(n);
  CHECK(std::abs(skew) < 0.05);
}

TEST_CASE("gamma moments at small and large shape") {
  for (double shape : {0.3, 4.2}) {
    Rng rng(static_cast<std::uint64_t>(40 + shape * 10));
    const std::size_t n = 200000;
    std::vector<double> xs(n);
    for (double& v : xs) v = rng.gamma(shape);
    CHECK(mean(xs) ==
          doctest::Approx(shape).epsilon(5.0 * std::sqrt(shape / double(n)) / shape));
    CHECK(sample_variance(xs) == doctest::Approx(shape).epsilon(0.06));
  }
}

TEST_CASE("beta moments") {
  Rng rng(55);
  const double a = 0.5, b = 1.5;
  const std::size_t n = 200000;
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.beta(a, b);
  const double m = a / (a + b);
  const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  CHECK(mean(xs) == doctest::Approx(m).epsilon(0.02));
  CHECK(sample_variance(xs) == doctest::Approx(var).epsilon(0.06));
  for (double v : xs) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (!(v >= 0.0 && v <= 1.0)) break;
  }
}

TEST_CASE("poisson small mean uses exact inversion statistics") {
  Rng rng(66);
  const double lambda = 4.2;
  const std::size_t n = 200000;
  std::vector<double> xs(n);
  for (double& v : xs) v = static_cast<double>(rng.poisson(lambda));
  CHECK(mean(xs) == doctest::Approx(lambda).epsilon(4.0 * std::sqrt(lambda / double(n)) / lambda));
  CHECK(sample_variance(xs) / mean(xs) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("poisson large mean matches moments") {
  Rng rng(67);
  const double lambda = 5000.7;
  const std::size_t n = 100000;
  std::vector<double> xs(n);
  for (double& v : xs) v = static_cast<double>(rng.poisson(lambda));
  CHECK(mean(xs) == doctest::Approx(lambda).epsilon(5.0 * std::sqrt(lambda / double(n)) / lambda));
  CHECK(sample_variance(xs) / lambda == doctest::Approx(1.0).epsilon(0.03));
  for (double v : xs) {
    CHECK(v >= 0.0);
    if (!(v >= 0.0)) break;
  }
}

TEST_CASE("poisson mid mean straddles the algorithm switch") {
  // same distribution family on both sides of the inversion/rejection cutover
  for (double lambda : {9.5, 10.5}) {
    Rng rng(static_cast<std::uint64_t>(lambda * 100));
    const std::size_t n = 150000;
    std::vector<double> xs(n);
    for (double& v : xs) v = static_cast<double>(rng.poisson(lambda));
    CHECK(mean(xs) ==
          doctest::Approx(lambda).epsilon(5.0 * std::sqrt(lambda / double(n)) / lambda));
    CHECK(sample_variance(xs) / lambda == doctest::Approx(1.0).epsilon(0.04));
  }
}
