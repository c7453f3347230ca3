#include "rankdiff/sde_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankdiff {

ParticleState default_initial_state(const DriftSpec& spec) {
  const auto check = check_stationarity_condition(spec);
  double gap = 1.0;
  if (check.ok) {
    const auto alphas = alpha_vector(spec);
    const double min_alpha = *std::min_element(alphas.begin(), alphas.end());
    gap = 1.0 / (2.0 * min_alpha);
  }
  ParticleState state;
  state.x.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    state.x[i] = gap * static_cast<double>(spec.size() - 1 - i);
  }
  return state;
}

void em_step(ParticleState& state, const DriftSpec& spec, const SimConfig& cfg, Rng& rng) {
  const std::size_t n = spec.size();
  if (state.x.size() != n) throw std::invalid_argument("em_step: state size mismatch");

  // rank particles at the step start: descending position, lower label wins ties
  static thread_local std::vector<std::size_t> order;
  order.resize(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (state.x[a] != state.x[b]) return state.x[a] > state.x[b];
    return a < b;
  });

  static thread_local std::vector<double> drift;
  drift.resize(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    drift[order[rank]] = spec.deltas()[rank];
  }

  const double noise = cfg.noise_scale * std::sqrt(cfg.dt);
  for (std::size_t i = 0; i < n; ++i) {
    state.x[i] += drift[i] * cfg.dt + noise * rng.normal();
  }
  state.t += cfg.dt;
}

SdeRun run_to_stationarity(const DriftSpec& spec, const SimConfig& cfg,
                           ParticleState state, Rng& rng) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run_to_stationarity: dt must be > 0");
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("run_to_stationarity: t_max must be > 0");
  const double burn_in = cfg.burn_in < 0.0 ? cfg.t_max / 4.0 : cfg.burn_in;
  if (burn_in >= cfg.t_max) {
    throw std::invalid_argument("run_to_stationarity: burn_in must be < t_max");
  }
  const long thin =
      cfg.thin < 0 ? std::max(1L, std::lround(1.0 / cfg.dt)) : std::max(1L, cfg.thin);

  SdeRun run;
  run.condition_ok = check_stationarity_condition(spec).ok;

  const long total_steps = std::lround(cfg.t_max / cfg.dt);
  const long burn_steps = std::lround(burn_in / cfg.dt);
  std::vector<double> sorted(spec.size());
  for (long s = 1; s <= total_steps; ++s) {
    em_step(state, spec, cfg, rng);
    if (s > burn_steps && (s - burn_steps) % thin == 0) {
      sorted.assign(state.x.begin(), state.x.end());
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      SpacingSample sample;
      sample.n = spec.size();
      sample.gaps.resize(spec.size() - 1);
      for (std::size_t j = 0; j + 1 < spec.size(); ++j) {
        sample.gaps[j] = sorted[j] - sorted[j + 1];
      }
      run.samples.push_back(std::move(sample));
    }
  }
  return run;
}

}  // namespace rankdiff
