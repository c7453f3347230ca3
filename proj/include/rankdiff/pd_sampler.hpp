#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rankdiff/core_types.hpp"
#include "rankdiff/rng.hpp"

namespace rankdiff {

// Truncation policy for the point-process route: atoms below the floor are
// dropped and their expected mass eps^(1-a)/(1-a) is carried back as synthetic
// chunks of size <= eps, so the emitted sequence sums to one and the top ranks
// stay uncontaminated.  Bias on rank statistics is O(eps^(1-a)) in mass and
// far smaller on the top ranks.
struct PppTruncation {
  double atom_floor = 1e-8;
};

// Truncation policy for the stick-breaking route: stop once the unbroken
// residual drops below the tolerance and emit it as synthetic chunks of size
// residual_tol/100, so the leftover never competes with a genuine stick.
struct StickTruncation {
  double residual_tol = 1e-9;
};

struct PDConfig {
  double alpha = 0.5;  // in (0,1)
  std::variant<PppTruncation, StickTruncation> truncation = PppTruncation{};
};

// Poisson point process route: atom count above the floor is Poisson with mean
// eps^-a / a, positions are iid eps * U^(-1/a), sorted decreasing, then
// normalized together with the synthetic tail chunks.
WeightSequence sample_pd_ppp(const PDConfig& cfg, Rng& rng);

// Stick-breaking route: sticks W_i ~ Beta(1-a, i*a) peeled off the residual.
WeightSequence sample_pd_stick_breaking(const PDConfig& cfg, Rng& rng);

// Normalized exp(beta * e_(i)) for the decreasing order statistics of n unit
// exponentials; requires beta > 1 (throws InvalidBeta otherwise).
WeightSequence sample_pd_via_ordered_exponentials(double beta, std::size_t n, Rng& rng);

struct MomentSummary {
  double p = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct WeightEnsembleStats {
  std::size_t samples = 0;
  std::vector<MomentSummary> diversity;  // one row per requested exponent
  double entropy_mean = 0.0;
  double entropy_std_error = 0.0;
};

WeightEnsembleStats empirical_weight_statistics(const std::vector<WeightSequence>& ensemble,
                                                const std::vector<double>& p_values);

}  // namespace rankdiff
