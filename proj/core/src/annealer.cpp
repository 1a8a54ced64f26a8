#include "concord/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "concord/detail/rng.hpp"
#include "concord/metrics.hpp"

namespace concord {
namespace {

constexpr int kCalibrationSamples = 100;
// Calibration target: the mean uphill move should be accepted with this
// probability at the starting temperature.
constexpr double kCalibrationAcceptance = 0.4;
// Starting temperature when calibration finds no uphill move at all (the
// landscape around the start is flat or downhill); effectively greedy.
constexpr double kFallbackTemperature = 1e-3;

struct Move {
  int expert;
  int row;
  int col;
  double value;
};

Move draw_move(const ExpertPanel& panel, std::mt19937_64& rng,
               const SaParams& params) {
  const int m = panel.expert_count();
  const int n = panel.alternative_count();
  for (;;) {
    const int h = detail::uniform_index(rng, m);
    const int i = detail::uniform_index(rng, n);
    // Off-diagonal column: draw from n - 1 slots and skip over i.
    const int r = detail::uniform_index(rng, n - 1);
    const int k = r + (r >= i ? 1 : 0);
    const double old_value = panel.relation(h).cell(i, k);
    const double nudge = detail::uniform_symmetric(rng, params.move_width);
    double value = std::clamp(old_value + nudge, 0.0, 1.0);
    if (params.value_grid > 0.0) {
      value = std::clamp(std::round(value / params.value_grid) * params.value_grid,
                         0.0, 1.0);
    }
    // A move that lands back on the current value would waste a trial, so
    // the whole triple is redrawn.  validate() guarantees the grid is fine
    // enough that an escaping value always exists.
    if (value != old_value) return {h, i, k, value};
  }
}

ExpertPanel apply_move(const ExpertPanel& panel, const Move& move,
                       bool enforce_reciprocity) {
  CompleteFpr relation =
      panel.relation(move.expert).with_cell(move.row, move.col, move.value);
  if (enforce_reciprocity) {
    relation = relation.with_cell(move.col, move.row, 1.0 - move.value);
  }
  return panel.with_relation(move.expert, std::move(relation));
}

double panel_cost(const std::vector<CompleteFpr>& relations,
                  const WeightConfig& weights) {
  double cl = 0.0;
  for (const auto& r : relations) cl += relation_consistency(r);
  cl /= static_cast<double>(relations.size());
  return 1.0 - ccl(cl, panel_consensus(relations), weights);
}

double calibrate_temperature(const ExpertPanel& panel, double start_cost,
                             const WeightConfig& weights,
                             const SaParams& params, std::mt19937_64& rng) {
  double uphill_sum = 0.0;
  int uphill_count = 0;
  for (int s = 0; s < kCalibrationSamples; ++s) {
    const Move move = draw_move(panel, rng, params);
    const ExpertPanel candidate =
        apply_move(panel, move, params.enforce_reciprocity);
    const double delta = panel_cost(candidate.relations(), weights) - start_cost;
    if (delta > 0.0) {
      uphill_sum += delta;
      ++uphill_count;
    }
  }
  if (uphill_count == 0) return kFallbackTemperature;
  const double mean_uphill = uphill_sum / static_cast<double>(uphill_count);
  return mean_uphill / std::log(1.0 / kCalibrationAcceptance);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidParams, what);
}

}  // namespace

void SaParams::validate() const {
  require(!initial_temp || *initial_temp > 0.0,
          "initial_temp must be positive when given");
  require(fast_cool_factor > 0.0 && fast_cool_factor < 1.0,
          "fast_cool_factor must lie in (0, 1)");
  require(slow_cool_factor > 0.0 && slow_cool_factor < 1.0,
          "slow_cool_factor must lie in (0, 1)");
  require(fast_cool_factor < slow_cool_factor,
          "fast_cool_factor must be smaller than slow_cool_factor");
  require(fast_cool_ratio > 0.0 && fast_cool_ratio < 1.0,
          "fast_cool_ratio must lie in (0, 1)");
  require(freeze_ratio > 0.0 && freeze_ratio < 1.0,
          "freeze_ratio must lie in (0, 1)");
  require(freeze_ratio < fast_cool_ratio,
          "freeze_ratio must be smaller than fast_cool_ratio");
  require(freeze_limit >= 1, "freeze_limit must be at least 1");
  require(stage_size_factor >= 1, "stage_size_factor must be at least 1");
  require(move_width > 0.0 && move_width <= 1.0,
          "move_width must lie in (0, 1]");
  require(value_grid >= 0.0, "value_grid must not be negative");
  // With a grid coarser than the nudge width, a nudge could be unable to
  // leave the current grid point and the move draw would spin forever.
  require(value_grid <= move_width, "value_grid must not exceed move_width");
  require(max_trials >= 1, "max_trials must be at least 1");
}

double cost(const ExpertPanel& panel, const WeightConfig& weights) {
  weights.validate();
  return panel_cost(panel.relations(), weights);
}

ExpertPanel neighbor(const ExpertPanel& panel, std::mt19937_64& rng,
                     const SaParams& params) {
  params.validate();
  return apply_move(panel, draw_move(panel, rng, params),
                    params.enforce_reciprocity);
}

OptimizationResult anneal(const ExpertPanel& panel, const WeightConfig& weights,
                          const SaParams& params) {
  weights.validate();
  params.validate();

  std::mt19937_64 rng(params.seed);
  const double start_cost = panel_cost(panel.relations(), weights);

  ExpertPanel current = panel;
  double current_cost = start_cost;
  ExpertPanel best = panel;
  double best_cost = start_cost;

  std::vector<TraceEntry> trace;

  // The panel may already clear the bar; no search needed then.
  if (1.0 - best_cost >= weights.gamma) {
    trace.push_back({0, 0.0, current_cost, best_cost});
    return {std::move(best), 1.0 - best_cost, best_cost,
            std::move(trace),  Termination::kThresholdReached, 0};
  }

  double temperature =
      params.initial_temp
          ? *params.initial_temp
          : calibrate_temperature(panel, start_cost, weights, params, rng);
  trace.push_back({0, temperature, current_cost, best_cost});

  // One stage visits each mutable cell stage_size_factor times on average.
  const std::uint64_t stage_length =
      static_cast<std::uint64_t>(params.stage_size_factor) *
      static_cast<std::uint64_t>(panel.expert_count()) *
      static_cast<std::uint64_t>(panel.alternative_count()) *
      static_cast<std::uint64_t>(panel.alternative_count() - 1);

  std::uint64_t total_trials = 0;
  int frozen_stages = 0;
  Termination termination = Termination::kFrozen;

  for (;;) {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    while (trials < stage_length && total_trials < params.max_trials) {
      ++trials;
      ++total_trials;

      const Move move = draw_move(current, rng, params);
      const ExpertPanel candidate =
          apply_move(current, move, params.enforce_reciprocity);
      const double candidate_cost = panel_cost(candidate.relations(), weights);
      const double delta = candidate_cost - current_cost;

      // Best tracking is independent of Metropolis acceptance: a record
      // breaker is remembered even if the walk then declines the move.
      if (candidate_cost < best_cost) {
        best = candidate;
        best_cost = candidate_cost;
        trace.push_back({total_trials, temperature, candidate_cost, best_cost});
        if (1.0 - best_cost >= weights.gamma) {
          return {std::move(best), 1.0 - best_cost, best_cost,
                  std::move(trace), Termination::kThresholdReached,
                  total_trials};
        }
      }

      if (delta <= 0.0 ||
          detail::uniform_unit(rng) <= std::exp(-delta / temperature)) {
        ++accepted;
        current = std::move(candidate);
        current_cost = candidate_cost;
      }
    }

    if (trials == 0) {
      // The cap landed exactly on a stage boundary.
      termination = Termination::kTrialCapHit;
      break;
    }

    const double acceptance =
        static_cast<double>(accepted) / static_cast<double>(trials);
    // High acceptance means the walk is still wandering freely: cool hard.
    // Low acceptance means it is settling: cool gently and watch for a
    // freeze.
    temperature *= acceptance >= params.fast_cool_ratio
                       ? params.fast_cool_factor
                       : params.slow_cool_factor;
    frozen_stages = acceptance < params.freeze_ratio ? frozen_stages + 1 : 0;
    trace.push_back({total_trials, temperature, current_cost, best_cost});

    if (frozen_stages >= params.freeze_limit) {
      termination = Termination::kFrozen;
      break;
    }
    if (total_trials >= params.max_trials) {
      termination = Termination::kTrialCapHit;
      break;
    }
  }

  return {std::move(best),  1.0 - best_cost, best_cost,
          std::move(trace), termination,     total_trials};
}

std::vector<SuggestedChange> suggest_changes(const ExpertPanel& original,
                                             const ExpertPanel& optimized,
                                             double report_threshold) {
  if (original.expert_count() != optimized.expert_count() ||
      original.alternative_count() != optimized.alternative_count()) {
    throw Error(ErrorCode::kShapeMismatch,
                "panels of different shape cannot be diffed");
  }
  if (report_threshold < 0.0) {
    throw Error(ErrorCode::kInvalidParams,
                "report_threshold must not be negative");
  }
  std::vector<SuggestedChange> changes;
  for (int h = 0; h < original.expert_count(); ++h) {
    for (int i = 0; i < original.alternative_count(); ++i) {
      for (int k = 0; k < original.alternative_count(); ++k) {
        if (i == k) continue;
        const double from = original.relation(h).cell(i, k);
        const double to = optimized.relation(h).cell(i, k);
        if (std::abs(to - from) > report_threshold) {
          changes.push_back({h, i, k, from, to});
        }
      }
    }
  }
  std::stable_sort(changes.begin(), changes.end(),
                   [](const SuggestedChange& a, const SuggestedChange& b) {
                     if (a.expert != b.expert) return a.expert < b.expert;
                     return std::abs(a.suggested - a.original) >
                            std::abs(b.suggested - b.original);
                   });
  return changes;
}

MultiStartResult anneal_with_restarts(const ExpertPanel& panel,
                                      const WeightConfig& weights,
                                      const SaParams& params, int restarts) {
  if (restarts < 1) {
    throw Error(ErrorCode::kInvalidParams, "restarts must be at least 1");
  }
  std::optional<MultiStartResult> result;
  for (int r = 0; r < restarts; ++r) {
    SaParams run_params = params;
    run_params.seed = params.seed + static_cast<std::uint64_t>(r);
    OptimizationResult run = anneal(panel, weights, run_params);
    const RestartOutcome outcome{run_params.seed, run.termination, run.best_ccl,
                                 run.trials_used};
    if (!result) {
      result = MultiStartResult{std::move(run), {outcome}};
    } else {
      result->outcomes.push_back(outcome);
      if (run.best_cost < result->best.best_cost) {
        result->best = std::move(run);
      }
    }
  }
  return std::move(*result);
}

}  // namespace concord
