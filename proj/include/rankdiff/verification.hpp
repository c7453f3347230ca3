#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rankdiff/core_types.hpp"
#include "rankdiff/report.hpp"

namespace rankdiff {

// ---- model families ---------------------------------------------------------

enum class ModelKind { atlas, gravity, custom, top_push, two_block };

// How the bottom-rank push (or gravity strength) scales with the system size.
struct EtaRule {
  enum class Kind { constant, proportional_to_n, critical_log };
  Kind kind = Kind::constant;
  double value = 1.0;
  // constant: value; proportional_to_n: value*n; critical_log: 1/2 + 1/ln(n)
  double value_at(std::size_t n) const;
  std::string describe() const;
};

struct DriftModel {
  std::string name;
  ModelKind kind = ModelKind::custom;
  std::function<DriftSpec(std::size_t)> generate;
  // declared limit of (mean drift - top drift); +infinity when divergent
  double eta_limit = 0.0;
  // drift profile near the top varies at most like C*(i-1)/n
  bool lipschitz_certified = false;
  // the top gap approaches 1/2 no slower than 1/log n
  bool critical_rate = false;
};

DriftModel make_atlas_model(const EtaRule& rule);
DriftModel make_gravity_model(const EtaRule& rule);
DriftModel make_custom_model(std::vector<double> deltas);
// single rank pulled down: delta_1 = -push, everyone else untouched
DriftModel make_top_push_model(double push = 0.25);
// antisymmetric three-block profile; block strength beta = 4*(1-eta)
DriftModel make_two_block_model(double eta);

// ---- regime diagnostics -------------------------------------------------------

struct RegimePoint {
  std::size_t n = 0;
  double eta_edge = 0.0;   // mean drift minus top-rank drift
  double gap_next = 0.0;   // mean drift minus second-rank drift
  double max_gap = 0.0;    // max over ranks of (mean drift - rank drift)
};

struct RegimeDiagnostics {
  std::vector<RegimePoint> trajectory;
  double eta_estimate = 0.0;      // edge estimate at the largest n
  // max_gap stays strictly above the edge estimate: the uniform bound fails
  bool uniform_gap_violated = false;
  // the edge and the next rank disagree in the limit: no single gap exists
  bool fixed_rank_gap_inconsistent = false;
};

RegimeDiagnostics check_regime_conditions(const DriftModel& model,
                                          const std::vector<std::size_t>& n_grid);

// ---- experiments ---------------------------------------------------------------

enum class Phase { pd_limit, dominance, collapse, inconclusive };
std::string phase_name(Phase phase);

// Samples the stationary top weights along the grid and classifies the limit:
// follows a Poisson-Dirichlet law, concentrates on the top particle, or decays
// to zero.  When an expected phase is given the matching quantitative rule is
// recorded as a pass/fail verdict.
ExperimentReport phase_sweep(const DriftModel& model, const std::vector<std::size_t>& n_grid,
                             std::size_t replicates, std::uint64_t seed, int threads,
                             std::optional<Phase> expected = {});

// Decay-rate diagnostic for vanishing top weight.  Supercritical gap:
// median log mu_1 / log n against 1/(2 eta) - 1.  Declared critical approach:
// median log mu_1 / log log n against -1 (deliberately loose: convergence is slow).
ExperimentReport rate_regression(const DriftModel& model, const std::vector<std::size_t>& n_grid,
                                 std::size_t replicates, std::uint64_t seed, int threads);

// ---- top-weight bounds under exponential gaps ------------------------------------

// Mean of each ranked gap, top down.  The random weight uses independent
// exponential gaps with those means; the proxy weight uses the means directly.
struct GapBoundConfig {
  std::vector<double> gap_means;
};

// Monte Carlo check of three closed-form bounds tying the random top weight to
// its deterministic-gap proxy; a bound counts as violated only beyond 3 SE.
ExperimentReport gap_bound_check(const GapBoundConfig& cfg, std::size_t draws,
                                 std::uint64_t seed, int threads);

// Randomized sweep: configs drawn with up to max_gaps gaps, means in (0,1].
ExperimentReport gap_bound_sweep(std::size_t n_configs, std::size_t max_gaps,
                                 std::size_t draws, std::uint64_t seed, int threads);

// ---- scenario registry ------------------------------------------------------------

struct ScenarioRequest {
  std::string name;
  std::uint64_t seed = 0;  // 0: the scenario's pinned default
  int threads = 0;         // <= 0: hardware
  std::optional<std::size_t> replicates;  // scaled-down runs for smoke tests
};

std::vector<std::string> scenario_names();
bool is_scenario_name(const std::string& name);

// Runs one named scenario with pinned parameters; throws std::invalid_argument
// (listing valid names) for an unknown name.
ExperimentReport run_scenario(const ScenarioRequest& req);

}  // namespace rankdiff
