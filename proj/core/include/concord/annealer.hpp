#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "concord/fpr.hpp"

namespace concord {

// Simulated annealing over panels: a state is the full set of expert
// relations, a move nudges one off-diagonal cell of one expert, and the
// cost is 1 - ccl(panel).  The run stops as soon as the blended score
// reaches gamma, or when the schedule freezes, or at the trial cap.

struct SaParams {
  // Starting temperature.  When unset, it is calibrated from the initial
  // panel: 100 sampled moves, mean positive cost increase delta+, and
  // temp0 = delta+ / ln(1 / 0.4), i.e. the temperature at which the mean
  // uphill move would be accepted with probability 0.4.
  std::optional<double> initial_temp;

  double fast_cool_factor = 0.8;   // cooling while acceptance is high
  double slow_cool_factor = 0.95;  // cooling once acceptance has dropped
  double fast_cool_ratio = 0.5;    // acceptance ratio above which to cool fast
  double freeze_ratio = 0.02;      // acceptance ratio that counts as frozen
  int freeze_limit = 5;            // consecutive frozen stages before stopping
  int stage_size_factor = 16;      // trials per stage = factor * m * n * (n-1)

  double move_width = 0.2;   // half-width of the uniform nudge
  double value_grid = 0.01;  // snap moved values to this step; 0 disables

  bool enforce_reciprocity = false;  // mirror each move onto cell (k, i)

  std::uint64_t seed = 1;
  std::uint64_t max_trials = 1'000'000;  // global safety cap

  // Throws kInvalidParams on any violated constraint (factors in (0, 1)
  // with fast < slow, ratios in (0, 1) with freeze < fast, positive limits
  // and widths, value_grid <= move_width so a move can always escape the
  // current grid point).
  void validate() const;
};

enum class Termination {
  kThresholdReached,  // blended score reached gamma
  kFrozen,            // freeze_limit consecutive near-zero-acceptance stages
  kTrialCapHit,       // max_trials spent
};

constexpr const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::kThresholdReached: return "threshold_reached";
    case Termination::kFrozen: return "frozen";
    case Termination::kTrialCapHit: return "trial_cap_hit";
  }
  return "unknown";
}

// One row of the optimisation trace: the initial state, each improvement of
// the best cost, and each stage boundary.
struct TraceEntry {
  std::uint64_t trial;
  double temperature;
  double current_cost;
  double best_cost;
};

struct OptimizationResult {
  ExpertPanel best_panel;
  double best_ccl;
  double best_cost;  // always 1 - best_ccl
  std::vector<TraceEntry> trace;
  Termination termination;
  std::uint64_t trials_used;
};

// Cost of a panel under the given weights: 1 - ccl.  Lower is better.
double cost(const ExpertPanel& panel, const WeightConfig& weights);

// One random neighbour: picks an expert, an off-diagonal cell and a nudge,
// redrawing until the (clamped, grid-snapped) value actually differs from
// the current one.  With enforce_reciprocity the mirrored cell is set to
// 1 - value in the same move.
ExpertPanel neighbor(const ExpertPanel& panel, std::mt19937_64& rng,
                     const SaParams& params);

// Full annealing run from `panel`.  Throws only on invalid inputs; an
// unsuccessful search is reported through `termination`, not an exception.
OptimizationResult anneal(const ExpertPanel& panel, const WeightConfig& weights,
                          const SaParams& params);

// One cell an expert is asked to move, from the original panel to the
// optimised one.
struct SuggestedChange {
  int expert;
  int row;
  int col;
  double original;
  double suggested;
};

// Cell-by-cell diff between two panels of identical shape, skipping moves
// of at most `report_threshold`.  Grouped by expert (ascending), largest
// moves first within each group.
std::vector<SuggestedChange> suggest_changes(const ExpertPanel& original,
                                             const ExpertPanel& optimized,
                                             double report_threshold = 0.005);

// Outcome of one seed in a multi-start run.
struct RestartOutcome {
  std::uint64_t seed;
  Termination termination;
  double best_ccl;
  std::uint64_t trials_used;
};

struct MultiStartResult {
  OptimizationResult best;  // lowest cost across restarts; earliest seed wins ties
  std::vector<RestartOutcome> outcomes;
};

// Runs `restarts` independent annealing runs with seeds seed, seed+1, ...
// and keeps the best result.  Throws kInvalidParams when restarts < 1.
MultiStartResult anneal_with_restarts(const ExpertPanel& panel,
                                      const WeightConfig& weights,
                                      const SaParams& params, int restarts);

}  // namespace concord
