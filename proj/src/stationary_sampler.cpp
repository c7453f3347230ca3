#include "rankdiff/stationary_sampler.hpp"

#include <cmath>

#include "rankdiff/parallel.hpp"

namespace rankdiff {

SpacingSample sample_stationary_spacings(const DriftSpec& spec, Rng& rng) {
  const auto alphas = alpha_vector(spec);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] > 0.0)) throw ConditionViolated(k + 1, alphas[k]);
  }
  SpacingSample out;
  out.n = spec.size();
  out.gaps.resize(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    out.gaps[k] = rng.exponential(2.0 * alphas[k]);
  }
  return out;
}

WeightSequence weights_from_spacings(const SpacingSample& spacings) {
  if (spacings.n < 2 || spacings.gaps.size() + 1 != spacings.n) {
    throw std::invalid_argument("weights_from_spacings: inconsistent sample");
  }
  // log weight of rank i+1 relative to the top: -(y_1 + ... + y_i) <= 0
  std::vector<double> rel(spacings.n);
  rel[0] = 0.0;
  for (std::size_t i = 1; i < spacings.n; ++i) {
    const double gap = spacings.gaps[i - 1];
    if (!(gap >= 0.0)) throw std::invalid_argument("weights_from_spacings: negative gap");
    rel[i] = rel[i - 1] - gap;
  }
  std::vector<double> tail_terms(spacings.n - 1);
  for (std::size_t i = 1; i < spacings.n; ++i) tail_terms[i - 1] = std::exp(rel[i]);
  const double log_denom = std::log1p(compensated_sum(tail_terms));
  std::vector<double> weights(spacings.n);
  for (std::size_t i = 0; i < spacings.n; ++i) weights[i] = std::exp(rel[i] - log_denom);
  return WeightSequence(std::move(weights));
}

std::vector<double> top_weights_from_spacings(const SpacingSample& spacings, std::size_t m) {
  if (spacings.n < 2 || spacings.gaps.size() + 1 != spacings.n) {
    throw std::invalid_argument("top_weights_from_spacings: inconsistent sample");
  }
  if (m > spacings.n) m = spacings.n;
  // identical arithmetic to weights_from_spacings so the shared prefix matches bit for bit
  std::vector<double> rel(spacings.n);
  rel[0] = 0.0;
  for (std::size_t i = 1; i < spacings.n; ++i) {
    const double gap = spacings.gaps[i - 1];
    if (!(gap >= 0.0)) throw std::invalid_argument("top_weights_from_spacings: negative gap");
    rel[i] = rel[i - 1] - gap;
  }
  std::vector<double> tail_terms(spacings.n - 1);
  for (std::size_t i = 1; i < spacings.n; ++i) tail_terms[i - 1] = std::exp(rel[i]);
  const double log_denom = std::log1p(compensated_sum(tail_terms));
  std::vector<double> top(m);
  for (std::size_t i = 0; i < m; ++i) top[i] = std::exp(rel[i] - log_denom);
  return top;
}

std::vector<WeightSequence> sample_stationary_weights(const DriftSpec& spec,
                                                      std::size_t replicates,
                                                      std::uint64_t master_seed,
                                                      int threads) {
  // fail fast (and on the caller's thread) when the gap law does not exist
  const StabilityCheck check = check_stationarity_condition(spec);
  if (!check.ok) throw ConditionViolated(check.first_bad_index, check.value);

  std::vector<WeightSequence> out;
  out.reserve(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    out.emplace_back(std::vector<double>{1.0});  // placeholder, overwritten below
  }
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng = Rng::substream(master_seed, stream_id(0, r));
    out[r] = weights_from_spacings(sample_stationary_spacings(spec, rng));
  });
  return out;
}

}  // namespace rankdiff
