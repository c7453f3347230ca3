#include "rankdiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rankdiff/core_types.hpp"

namespace rankdiff {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_variance: need n >= 2");
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - m;
    sq[i] = d * d;
  }
  return compensated_sum(sq) / static_cast<double>(xs.size() - 1);
}

double std_error(const std::vector<double>& xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q out of [0,1]");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

double bootstrap_median_stderr(const std::vector<double>& xs, Rng& rng, int resamples) {
  if (xs.size() < 2) throw std::invalid_argument("bootstrap_median_stderr: need n >= 2");
  if (resamples < 2) throw std::invalid_argument("bootstrap_median_stderr: need >= 2 resamples");
  std::vector<double> medians(static_cast<std::size_t>(resamples));
  std::vector<double> draw(xs.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t j =
          static_cast<std::size_t>(rng.uniform01() * static_cast<double>(xs.size()));
      draw[i] = xs[j < xs.size() ? j : xs.size() - 1];
    }
    medians[static_cast<std::size_t>(r)] = median(draw);
  }
  return std::sqrt(sample_variance(medians));
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double total = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    total += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * total));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double scale = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail(scale * d)};
}

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
  }
  return {d, kolmogorov_tail(std::sqrt(n) * d)};
}

double ks_two_sample_threshold(double level, std::size_t m, std::size_t n) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("ks threshold: bad level");
  const double c = std::sqrt(-std::log(level / 2.0) / 2.0);
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  return c * std::sqrt((dm + dn) / (dm * dn));
}

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_line: need matching samples, n >= 2");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace rankdiff
