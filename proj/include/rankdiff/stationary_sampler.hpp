#pragma once

#include <cstdint>
#include <vector>

#include "rankdiff/core_types.hpp"
#include "rankdiff/rng.hpp"

namespace rankdiff {

// Adjacent ranked gaps y_j = x_(j) - x_(j+1), j = 1..n-1.
struct SpacingSample {
  std::size_t n = 0;
  std::vector<double> gaps;
};

// One exact draw from the stationary gap law: independent exponentials with
// rate twice the cumulative centered drift sum.  Throws ConditionViolated when
// some cumulative sum is nonpositive.
SpacingSample sample_stationary_spacings(const DriftSpec& spec, Rng& rng);

// Ranked market weights exp(x_(i)) / sum_j exp(x_(j)) computed from gaps in
// log space, so huge gaps underflow to zero weight instead of overflowing.
WeightSequence weights_from_spacings(const SpacingSample& spacings);

// First m ranked weights only (still normalized against all n particles);
// cheaper than materializing the full sequence when n is large.
std::vector<double> top_weights_from_spacings(const SpacingSample& spacings, std::size_t m);

// replicate k uses Rng::substream(master_seed, stream_id(0, k)); output order
// is by replicate index, independent of the thread count
std::vector<WeightSequence> sample_stationary_weights(const DriftSpec& spec,
                                                      std::size_t replicates,
                                                      std::uint64_t master_seed,
                                                      int threads = 1);

}  // namespace rankdiff
