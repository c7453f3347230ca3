#pragma once

#include <vector>

#include "rankdiff/core_types.hpp"
#include "rankdiff/rng.hpp"
#include "rankdiff/stationary_sampler.hpp"

namespace rankdiff {

struct SimConfig {
  double dt = 0.005;
  double t_max = 100.0;
  double burn_in = -1.0;   // < 0: defaults to t_max / 4
  long thin = -1;          // < 0: defaults to max(1, round(1/dt)) steps
  double noise_scale = 1.0;
};

struct ParticleState {
  double t = 0.0;
  std::vector<double> x;  // by particle label, not by rank
};

// Equally spaced start; gap set from the widest stationary mean gap so the
// burn-in does not start absurdly far from equilibrium.
ParticleState default_initial_state(const DriftSpec& spec);

// One Euler-Maruyama step.  Drift is frozen at the step-start ranking; ties
// rank the lower particle label on top, so the drift assignment is a bijection.
void em_step(ParticleState& state, const DriftSpec& spec, const SimConfig& cfg, Rng& rng);

struct SdeRun {
  std::vector<SpacingSample> samples;
  bool condition_ok = true;  // false: gap law does not exist, run proceeded anyway
};

SdeRun run_to_stationarity(const DriftSpec& spec, const SimConfig& cfg,
                           ParticleState state, Rng& rng);

}  // namespace rankdiff
