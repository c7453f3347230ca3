#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdiff {

// ---- errors -----------------------------------------------------------------

// Thrown when a drift assignment admits no stationary gap distribution.
// Carries the first offending cumulative-gap index (1-based) and its value.
struct ConditionViolated : std::runtime_error {
  ConditionViolated(std::size_t index, double value);
  std::size_t index;
  double value;
};

struct InvalidBeta : std::runtime_error {
  explicit InvalidBeta(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ModelMismatch : std::runtime_error {
  explicit ModelMismatch(const std::string& what) : std::runtime_error(what) {}
};

// ---- numeric helpers ----------------------------------------------------------

// Neumaier compensated sum; keeps long normalized-weight sums accurate to a few ulp.
double compensated_sum(const std::vector<double>& xs);

// ---- drift assignment ----------------------------------------------------------

// Per-rank drift assignment for n particles.  Index 0 is the drift of the
// top-ranked (largest-position) particle.
class DriftSpec {
 public:
  explicit DriftSpec(std::vector<double> deltas);

  std::size_t size() const { return deltas_.size(); }
  const std::vector<double>& deltas() const { return deltas_; }
  double mean_drift() const { return mean_; }

 private:
  std::vector<double> deltas_;
  double mean_;
};

// Cumulative centered drift sums: entry k-1 holds sum_{i<=k} (mean - delta_i),
// k = 1..n-1.  These are the stationary gap rate parameters up to a factor 2.
std::vector<double> alpha_vector(const DriftSpec& spec);

struct StabilityCheck {
  bool ok = true;
  std::size_t first_bad_index = 0;  // 1-based; 0 when ok
  double value = 0.0;
};

// All cumulative centered sums must be strictly positive.
StabilityCheck check_stationarity_condition(const DriftSpec& spec);

// ---- ranked market weights -----------------------------------------------------

// Nonincreasing, nonnegative, sums to one.  Construction renormalizes when the
// raw sum is within 1e-9 of one and rejects anything farther off; after
// construction the sum is within 1e-12.
class WeightSequence {
 public:
  explicit WeightSequence(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const { return weights_; }
  std::vector<double>::const_iterator begin() const { return weights_.begin(); }
  std::vector<double>::const_iterator end() const { return weights_.end(); }

 private:
  std::vector<double> weights_;
};

// sum of w_i^p for p > 0 (0^p treated as 0)
double diversity_index(const WeightSequence& w, double p);

// -sum w_i log w_i with 0 log 0 = 0
double shannon_entropy(const WeightSequence& w);

// ---- ranked point configurations ------------------------------------------------

// Nonincreasing ranked positions, conceptually padded with -infinity beyond the
// stored prefix.  Entries may themselves be -infinity (empty slots).
class PointSequence {
 public:
  explicit PointSequence(std::vector<double> points);

  std::size_t stored_size() const { return points_.size(); }
  // 0-based; indices past the stored prefix read as -infinity
  double at(std::size_t i) const;
  const std::vector<double>& values() const { return points_; }

 private:
  std::vector<double> points_;
};

// Geometrically damped coordinate metric: sum_{i=1..depth} min(|x_i-y_i|,1)/2^i.
// Two -infinity coordinates contribute 0; a finite vs -infinity pair clamps to 1.
double metric_d(const PointSequence& x, const PointSequence& y, int depth = 64);

// Plain L1 distance between weight vectors, zero-padded to equal length.
double metric_dprime(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rankdiff
