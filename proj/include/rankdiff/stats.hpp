#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rankdiff/rng.hpp"

namespace rankdiff {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // n-1 denominator
double std_error(const std::vector<double>& xs);
double median(std::vector<double> xs);                  // takes a copy, sorts
double quantile(std::vector<double> xs, double q);      // linear interpolation

// Standard error of the median via bootstrap resampling (deterministic given rng).
double bootstrap_median_stderr(const std::vector<double>& xs, Rng& rng, int resamples = 200);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;  // asymptotic
};

// Asymptotic Kolmogorov tail probability Q(lambda) = 2 sum (-1)^{k-1} exp(-2k^2 lambda^2).
double kolmogorov_tail(double lambda);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

// Rejection threshold on the two-sample statistic at the given level:
// sqrt(-ln(level/2)/2) * sqrt((m+n)/(m*n)).
double ks_two_sample_threshold(double level, std::size_t m, std::size_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace rankdiff
