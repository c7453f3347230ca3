#include "rankdiff/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rankdiff {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConditionViolated::ConditionViolated(std::size_t idx, double val)
    : std::runtime_error("stationarity condition violated: cumulative centered drift sum #" +
                         std::to_string(idx) + " = " + std::to_string(val) +
                         " (must be > 0)"),
      index(idx),
      value(val) {}

double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

// ---- DriftSpec -----------------------------------------------------------------

DriftSpec::DriftSpec(std::vector<double> deltas) : deltas_(std::move(deltas)) {
  if (deltas_.size() < 2) {
    throw std::invalid_argument("DriftSpec: need at least two particles");
  }
  for (double d : deltas_) {
    if (!std::isfinite(d)) throw std::invalid_argument("DriftSpec: drifts must be finite");
  }
  mean_ = compensated_sum(deltas_) / static_cast<double>(deltas_.size());
}

std::vector<double> alpha_vector(const DriftSpec& spec) {
  const auto& d = spec.deltas();
  const double mean = spec.mean_drift();
  std::vector<double> alphas(d.size() - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    acc += mean - d[k];
    alphas[k] = acc;
  }
  return alphas;
}

StabilityCheck check_stationarity_condition(const DriftSpec& spec) {
  const auto alphas = alpha_vector(spec);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] > 0.0)) {
      return {false, k + 1, alphas[k]};
    }
  }
  return {true, 0, 0.0};
}

// ---- WeightSequence --------------------------------------------------------------

WeightSequence::WeightSequence(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("WeightSequence: empty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w >= 0.0) || w > 1.0 + 1e-9 || std::isnan(w)) {
      throw std::invalid_argument("WeightSequence: entries must lie in [0,1]");
    }
    if (i > 0 && weights_[i] > weights_[i - 1]) {
      throw std::invalid_argument("WeightSequence: entries must be nonincreasing");
    }
  }
  const double sum = compensated_sum(weights_);
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("WeightSequence: sum " + std::to_string(sum) +
                                " too far from 1");
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    for (auto& w : weights_) w /= sum;
  }
}

double diversity_index(const WeightSequence& w, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("diversity_index: p must be > 0");
  std::vector<double> terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] > 0.0 ? std::pow(w[i], p) : 0.0;
  }
  return compensated_sum(terms);
}

double shannon_entropy(const WeightSequence& w) {
  std::vector<double> terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] > 0.0 ? -w[i] * std::log(w[i]) : 0.0;
  }
  return compensated_sum(terms);
}

// ---- PointSequence ---------------------------------------------------------------

PointSequence::PointSequence(std::vector<double> points) : points_(std::move(points)) {
  double prev = kInf;
  for (double x : points_) {
    if (std::isnan(x) || x == kInf) {
      throw std::invalid_argument("PointSequence: entries must be finite or -infinity");
    }
    if (x > prev) throw std::invalid_argument("PointSequence: entries must be nonincreasing");
    prev = x;
  }
}

double PointSequence::at(std::size_t i) const {
  return i < points_.size() ? points_[i] : -kInf;
}

double metric_d(const PointSequence& x, const PointSequence& y, int depth) {
  if (depth < 1) throw std::invalid_argument("metric_d: depth must be >= 1");
  double total = 0.0;
  double scale = 1.0;
  for (int i = 0; i < depth; ++i) {
    scale *= 0.5;
    const double a = x.at(static_cast<std::size_t>(i));
    const double b = y.at(static_cast<std::size_t>(i));
    const bool a_empty = a == -kInf;
    const bool b_empty = b == -kInf;
    double term;
    if (a_empty && b_empty) {
      term = 0.0;
    } else if (a_empty || b_empty) {
      term = 1.0;
    } else {
      term = std::min(std::fabs(a - b), 1.0);
    }
    total += scale * term;
  }
  return total;
}

double metric_dprime(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::max(x.size(), y.size());
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < x.size() ? x[i] : 0.0;
    const double b = i < y.size() ? y[i] : 0.0;
    terms[i] = std::fabs(a - b);
  }
  return compensated_sum(terms);
}

}  // namespace rankdiff
