#include "rankdiff/pd_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rankdiff/stats.hpp"

namespace rankdiff {

namespace {

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("PD sampler: alpha must lie in (0,1)");
  }
}

WeightSequence normalize_sorted_atoms(std::vector<double> atoms) {
  std::sort(atoms.begin(), atoms.end(), std::greater<>());
  const double total = compensated_sum(atoms);
  for (auto& a : atoms) a /= total;
  return WeightSequence(std::move(atoms));
}

}  // namespace

WeightSequence sample_pd_ppp(const PDConfig& cfg, Rng& rng) {
  validate_alpha(cfg.alpha);
  const auto* trunc = std::get_if<PppTruncation>(&cfg.truncation);
  if (trunc == nullptr) {
    throw std::invalid_argument("sample_pd_ppp: config carries no atom floor");
  }
  const double eps = trunc->atom_floor;
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("sample_pd_ppp: atom floor must lie in (0,1)");
  }
  const double mean_count = std::pow(eps, -cfg.alpha) / cfg.alpha;
  if (mean_count / (1.0 - cfg.alpha) > 2e8) {
    throw std::invalid_argument("sample_pd_ppp: atom floor too small for this alpha");
  }
  const long long count = rng.poisson(mean_count);
  // expected mass of the atoms below the floor; added back so the denominator
  // matches the full process
  const double tail_mass = std::pow(eps, 1.0 - cfg.alpha) / (1.0 - cfg.alpha);
  std::vector<double> atoms;
  atoms.reserve(static_cast<std::size_t>(count + 2 + std::llround(tail_mass / eps)));
  const double neg_inv_alpha = -1.0 / cfg.alpha;
  for (long long i = 0; i < count; ++i) {
    atoms.push_back(eps * std::pow(rng.uniform_pos(), neg_inv_alpha));
  }
  // The tail mass is emitted in chunks no larger than the floor: one merged
  // tail atom can rival genuine top atoms when alpha is large (its mass grows
  // like eps^(1-alpha)), which visibly corrupts the top-weight law, while
  // sub-floor chunks can never outrank a real atom.
  for (double remaining = tail_mass; remaining > 0.0; remaining -= eps) {
    atoms.push_back(std::min(eps, remaining));
  }
  return normalize_sorted_atoms(std::move(atoms));
}

WeightSequence sample_pd_stick_breaking(const PDConfig& cfg, Rng& rng) {
  validate_alpha(cfg.alpha);
  const auto* trunc = std::get_if<StickTruncation>(&cfg.truncation);
  if (trunc == nullptr) {
    throw std::invalid_argument("sample_pd_stick_breaking: config carries no residual tolerance");
  }
  const double tol = trunc->residual_tol;
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("sample_pd_stick_breaking: residual tolerance must lie in (0,1)");
  }
  std::vector<double> atoms;
  double residual = 1.0;
  double i = 1.0;
  while (residual >= tol) {
    const double w = rng.beta(1.0 - cfg.alpha, i * cfg.alpha);
    const double atom = w * residual;
    atoms.push_back(atom);
    residual -= atom;  // keeps sum(atoms) + residual == 1 exactly in fp
    i += 1.0;
  }
  // The leftover mass is emitted in chunks well below the stopping tolerance.
  // A single leftover atom would sit at ~tol and outrank the genuine largest
  // stick whenever that stick is smaller -- size-biased sampling guarantees the
  // true maximum has already been generated by the time the residual drops
  // under tol, so with sub-tol chunks the reported top weight is exact.
  const double chunk = 0.01 * tol;
  for (double remaining = residual; remaining > 0.0; remaining -= chunk) {
    atoms.push_back(std::min(chunk, remaining));
  }
  std::sort(atoms.begin(), atoms.end(), std::greater<>());
  return WeightSequence(std::move(atoms));
}

WeightSequence sample_pd_via_ordered_exponentials(double beta, std::size_t n, Rng& rng) {
  if (!(beta > 1.0)) throw InvalidBeta("ordered-exponentials route requires beta > 1");
  if (n == 0) throw std::invalid_argument("sample_pd_via_ordered_exponentials: n must be >= 1");
  std::vector<double> e(n);
  for (auto& v : e) v = rng.exponential(1.0);
  std::sort(e.begin(), e.end(), std::greater<>());
  // exponents relative to the top stay <= 0; no overflow for any beta
  std::vector<double> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = std::exp(beta * (e[i] - e[0]));
  const double total = compensated_sum(atoms);
  for (auto& a : atoms) a /= total;
  return WeightSequence(std::move(atoms));
}

WeightEnsembleStats empirical_weight_statistics(const std::vector<WeightSequence>& ensemble,
                                                const std::vector<double>& p_values) {
  if (ensemble.empty()) throw std::invalid_argument("empirical_weight_statistics: no samples");
  for (double p : p_values) {
    if (!(p > 0.0)) throw std::invalid_argument("empirical_weight_statistics: p must be > 0");
  }
  WeightEnsembleStats stats;
  stats.samples = ensemble.size();
  std::vector<double> values(ensemble.size());
  for (double p : p_values) {
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      values[i] = diversity_index(ensemble[i], p);
    }
    MomentSummary row;
    row.p = p;
    row.mean = mean(values);
    row.std_error = ensemble.size() > 1 ? std_error(values) : 0.0;
    stats.diversity.push_back(row);
  }
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    values[i] = shannon_entropy(ensemble[i]);
  }
  stats.entropy_mean = mean(values);
  stats.entropy_std_error = ensemble.size() > 1 ? std_error(values) : 0.0;
  return stats;
}

}  // namespace rankdiff
