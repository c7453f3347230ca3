#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rankdiff/core_types.hpp"
#include "rankdiff/pd_sampler.hpp"
#include "rankdiff/rng.hpp"
#include "rankdiff/stats.hpp"

using namespace rankdiff;

namespace {

PDConfig ppp_cfg(double alpha, double floor) {
  return PDConfig{alpha, PppTruncation{floor}};
}

PDConfig stick_cfg(double alpha, double tol) {
  return PDConfig{alpha, StickTruncation{tol}};
}

std::vector<double> top_weights(std::size_t reps, std::uint64_t seed,
                                const std::function<WeightSequence(Rng&)>& draw) {
  std::vector<double> v1(reps);
  Rng rng(seed);
  for (auto& v : v1) v = draw(rng)[0];
  return v1;
}

}  // namespace

TEST_CASE("ppp route emits a normalized decreasing weight sequence") {
  Rng rng(5101);
  for (double alpha : {0.2, 0.5, 0.8}) {
    const auto w = sample_pd_ppp(ppp_cfg(alpha, 1e-4), rng);
    REQUIRE(w.size() >= 2);
    std::vector<double> vals(w.begin(), w.end());
    CHECK(std::abs(compensated_sum(vals) - 1.0) <= 1e-12);
    CHECK(std::is_sorted(vals.rbegin(), vals.rend()));  // nonincreasing, ties allowed
    CHECK(vals.front() > 0.0);
    CHECK(vals.front() <= 1.0);
    CHECK(vals.back() > 0.0);
  }
}

TEST_CASE("ppp route validates its configuration") {
  Rng rng(5102);
  CHECK_THROWS_AS(sample_pd_ppp(stick_cfg(0.5, 1e-9), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(0.5, 0.0), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(0.5, 1.0), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(0.5, -1e-6), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(0.0, 1e-6), rng), DomainError);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(1.0, 1e-6), rng), DomainError);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(-0.3, 1e-6), rng), DomainError);
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(1.7, 1e-6), rng), DomainError);
  // a floor this small at large alpha would ask for ~10^10 atoms
  CHECK_THROWS_AS(sample_pd_ppp(ppp_cfg(0.8, 1e-12), rng), std::invalid_argument);
}

TEST_CASE("ppp atom count has the moments of a shifted Poisson") {
  const double alpha = 0.5;
  const double eps = 1e-4;
  const double mean_count = std::pow(eps, -alpha) / alpha;
  // the deterministic chunk count the sampler will append for the tail mass
  std::size_t chunks = 0;
  for (double remaining = std::pow(eps, 1.0 - alpha) / (1.0 - alpha); remaining > 0.0;
       remaining -= eps) {
    ++chunks;
  }
  const std::size_t reps = 400;
  std::vector<double> sizes(reps);
  Rng rng(5103);
  for (auto& s : sizes) {
    s = static_cast<double>(sample_pd_ppp(ppp_cfg(alpha, eps), rng).size());
  }
  const double expected = mean_count + static_cast<double>(chunks);
  const double se = std::sqrt(mean_count / static_cast<double>(reps));
  CHECK(std::abs(mean(sizes) - expected) <= 4.0 * se);
  const double var = sample_variance(sizes);
  CHECK(var >= 0.6 * mean_count);
  CHECK(var <= 1.5 * mean_count);
}

TEST_CASE("ppp diversity index matches the 1 - alpha limit") {
  struct Row {
    double alpha;
    double floor;
    std::size_t reps;
  };
  for (const Row& row : {Row{0.2, 1e-8, 1200}, Row{0.5, 1e-7, 1600}, Row{0.8, 1e-4, 1500}}) {
    Rng rng(5104);
    std::vector<double> d2(row.reps);
    for (auto& d : d2) {
      d = diversity_index(sample_pd_ppp(ppp_cfg(row.alpha, row.floor), rng), 2.0);
    }
    CHECK(std::abs(mean(d2) - (1.0 - row.alpha)) < 0.02);
  }
}

TEST_CASE("smaller alpha concentrates more mass in the top atom") {
  const auto v_low = top_weights(800, 5105, [](Rng& r) {
    return sample_pd_ppp(ppp_cfg(0.3, 1e-6), r);
  });
  const auto v_high = top_weights(800, 5106, [](Rng& r) {
    return sample_pd_ppp(ppp_cfg(0.7, 1e-5), r);
  });
  const double gap = mean(v_low) - mean(v_high);
  CHECK(gap > 6.0 * (std_error(v_low) + std_error(v_high)));
}

TEST_CASE("stick route emits a normalized decreasing weight sequence and terminates") {
  Rng rng(5107);
  struct Row {
    double alpha;
    double tol;
  };
  for (const Row& row : {Row{0.2, 1e-9}, Row{0.5, 1e-2}, Row{0.8, 0.1}}) {
    const auto w = sample_pd_stick_breaking(stick_cfg(row.alpha, row.tol), rng);
    REQUIRE(w.size() >= 2);
    std::vector<double> vals(w.begin(), w.end());
    CHECK(std::abs(compensated_sum(vals) - 1.0) <= 1e-12);
    CHECK(std::is_sorted(vals.rbegin(), vals.rend()));
    CHECK(vals.back() > 0.0);
    // the leftover below the stopping tolerance is present as sub-tol chunks
    CHECK(vals.back() <= 0.01 * row.tol * 1.01);
  }
}

TEST_CASE("stick route validates its configuration") {
  Rng rng(5108);
  CHECK_THROWS_AS(sample_pd_stick_breaking(ppp_cfg(0.5, 1e-8), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_stick_breaking(stick_cfg(0.5, 0.0), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_stick_breaking(stick_cfg(0.5, 1.0), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_stick_breaking(stick_cfg(0.5, -0.5), rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pd_stick_breaking(stick_cfg(0.0, 1e-3), rng), DomainError);
  CHECK_THROWS_AS(sample_pd_stick_breaking(stick_cfg(1.0, 1e-3), rng), DomainError);
}

TEST_CASE("both pd routes draw the same top-weight law") {
  struct Row {
    double alpha;
    double floor;
    double tol;
  };
  const std::size_t reps = 1500;
  const double threshold = ks_two_sample_threshold(0.001, reps, reps);
  for (const Row& row : {Row{0.2, 1e-8, 1e-9}, Row{0.5, 1e-6, 1e-2}, Row{0.8, 1e-4, 0.1}}) {
    const auto via_ppp = top_weights(reps, 5109, [&](Rng& r) {
      return sample_pd_ppp(ppp_cfg(row.alpha, row.floor), r);
    });
    const auto via_stick = top_weights(reps, 5110, [&](Rng& r) {
      return sample_pd_stick_breaking(stick_cfg(row.alpha, row.tol), r);
    });
    const KsResult ks = ks_two_sample(via_ppp, via_stick);
    INFO("alpha ", row.alpha, " ks ", ks.statistic);
    CHECK(ks.statistic < threshold);
  }
}

TEST_CASE("stick diversity agrees with the ppp estimate") {
  const std::size_t reps = 1500;
  Rng rng_a(5111);
  Rng rng_b(5112);
  std::vector<double> d2_ppp(reps);
  std::vector<double> d2_stick(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    d2_ppp[i] = diversity_index(sample_pd_ppp(ppp_cfg(0.5, 1e-6), rng_a), 2.0);
    d2_stick[i] = diversity_index(sample_pd_stick_breaking(stick_cfg(0.5, 1e-2), rng_b), 2.0);
  }
  CHECK(std::abs(mean(d2_ppp) - mean(d2_stick)) < 0.02);
}

TEST_CASE("ordered-exponential route validates its arguments") {
  Rng rng(5113);
  CHECK_THROWS_AS(sample_pd_via_ordered_exponentials(1.0, 100, rng), InvalidBeta);
  CHECK_THROWS_AS(sample_pd_via_ordered_exponentials(0.5, 100, rng), InvalidBeta);
  CHECK_THROWS_AS(sample_pd_via_ordered_exponentials(-2.0, 100, rng), InvalidBeta);
  CHECK_THROWS_AS(sample_pd_via_ordered_exponentials(2.0, 0, rng), std::invalid_argument);
}

TEST_CASE("ordered-exponential weights are invariant under a common shift") {
  const double beta = 2.0;
  const std::size_t n = 1000;
  const double shift = 5.0;
  Rng rng(5114);
  const auto w = sample_pd_via_ordered_exponentials(beta, n, rng);

  // replay the same draws, shift every variate, and normalize the plain way;
  // the ratio must cancel the shift
  Rng replay(5114);
  std::vector<double> e(n);
  for (auto& v : e) v = replay.exponential(1.0);
  std::sort(e.begin(), e.end(), std::greater<>());
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = std::exp(beta * (e[i] + shift));
  const double total = compensated_sum(shifted);
  REQUIRE(w.size() == n);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(shifted[i] / total - w[i]) <= 1e-12 * w[i]);
  }
}

TEST_CASE("ordered exponentials approach the alpha = 1/2 law for beta = 2") {
  const std::size_t reps = 2000;
  const auto via_exp = top_weights(reps, 5115, [](Rng& r) {
    return sample_pd_via_ordered_exponentials(2.0, 10000, r);
  });
  const auto via_ppp = top_weights(reps, 5116, [](Rng& r) {
    return sample_pd_ppp(ppp_cfg(0.5, 1e-6), r);
  });
  const KsResult ks = ks_two_sample(via_exp, via_ppp);
  INFO("ks ", ks.statistic);
  CHECK(ks.statistic < 0.03);  // covers the finite-n bias at n = 10^4
}

TEST_CASE("suffix-sum order statistics reproduce the ordered-exponential law") {
  // e_(j) = sum_{i=j..n} eta_i / i in law; build the order statistics without
  // sorting and compare top weights across 1200 draws per route
  const double beta = 2.0;
  const std::size_t n = 2000;
  const std::size_t reps = 1200;
  const auto direct = top_weights(reps, 5117, [&](Rng& r) {
    return sample_pd_via_ordered_exponentials(beta, n, r);
  });
  std::vector<double> suffix(reps);
  Rng rng(5118);
  std::vector<double> e(n);
  for (auto& v1 : suffix) {
    for (std::size_t i = 0; i < n; ++i) e[i] = rng.exponential(1.0) / static_cast<double>(i + 1);
    double acc = 0.0;
    double weight_top = 0.0;
    double total = 0.0;
    // suffix sums grow from the smallest order statistic up to the largest
    std::vector<double> order(n);
    for (std::size_t i = n; i-- > 0;) {
      acc += e[i];
      order[i] = acc;
    }
    const double top = order[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::exp(beta * (order[i] - top));
      total += a;
      if (i == 0) weight_top = a;
    }
    v1 = weight_top / total;
  }
  const KsResult ks = ks_two_sample(direct, suffix);
  INFO("ks ", ks.statistic);
  CHECK(ks.statistic < ks_two_sample_threshold(0.001, reps, reps));
}

TEST_CASE("ensemble statistics report exact values on hand-built samples") {
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0};

  const std::vector<WeightSequence> point{WeightSequence({1.0})};
  const auto stats_point = empirical_weight_statistics(point, ps);
  CHECK(stats_point.samples == 1);
  for (const auto& row : stats_point.diversity) {
    CHECK(row.mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(row.std_error == 0.0);
  }
  CHECK(stats_point.entropy_mean == doctest::Approx(0.0).epsilon(1e-14));

  const std::size_t k = 5;
  const std::vector<WeightSequence> uniform{WeightSequence(std::vector<double>(k, 1.0 / k))};
  const auto stats_uniform = empirical_weight_statistics(uniform, ps);
  for (const auto& row : stats_uniform.diversity) {
    const double expect = std::pow(static_cast<double>(k), 1.0 - row.p);
    CHECK(std::abs(row.mean - expect) <= 1e-12);
  }
  CHECK(std::abs(stats_uniform.entropy_mean - std::log(static_cast<double>(k))) <= 1e-12);
}

TEST_CASE("ensemble statistics validate their inputs") {
  CHECK_THROWS_AS(empirical_weight_statistics({}, {2.0}), std::invalid_argument);
  const std::vector<WeightSequence> one{WeightSequence({1.0})};
  CHECK_THROWS_AS(empirical_weight_statistics(one, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(empirical_weight_statistics(one, {-1.5}), std::invalid_argument);
}

TEST_CASE("pd ensemble: unit diversity at p = 1, decreasing in p, digamma entropy") {
  const std::size_t reps = 1500;
  std::vector<WeightSequence> ensemble;
  ensemble.reserve(reps);
  Rng rng(5119);
  for (std::size_t i = 0; i < reps; ++i) {
    ensemble.push_back(sample_pd_ppp(ppp_cfg(0.5, 1e-6), rng));
  }
  const auto stats = empirical_weight_statistics(ensemble, {1.0, 1.5, 2.0, 3.0});

  CHECK(std::abs(stats.diversity[0].mean - 1.0) <= 1e-12);
  CHECK(stats.diversity[0].std_error <= 1e-12);

  for (std::size_t i = 2; i < stats.diversity.size(); ++i) {
    const auto& hi = stats.diversity[i - 1];
    const auto& lo = stats.diversity[i];
    CHECK(hi.mean - lo.mean > 3.0 * (hi.std_error + lo.std_error));
  }

  // mean Shannon entropy of the alpha = 1/2 family: digamma(1) - digamma(1/2) = 2 ln 2
  const double limit = 2.0 * std::log(2.0);
  CHECK(std::abs(stats.entropy_mean - limit) <= 3.0 * stats.entropy_std_error + 5e-3);
}
