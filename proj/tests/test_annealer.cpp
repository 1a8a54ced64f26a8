#include <algorithm>
#include <cmath>
#include <set>

#include "concord/annealer.hpp"
#include "concord/detail/rng.hpp"
#include "concord/metrics.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace concord;
using namespace fixtures;

namespace {

ExpertPanel completed_panel() {
  return ExpertPanel({CompleteFpr::from_rows(cp1()), CompleteFpr::from_rows(cp2()),
                      CompleteFpr::from_rows(cp3()), CompleteFpr::from_rows(cp4())});
}

ExpertPanel spv_panel() {
  return ExpertPanel({CompleteFpr::from_rows(spv1()), CompleteFpr::from_rows(spv2()),
                      CompleteFpr::from_rows(spv3()), CompleteFpr::from_rows(spv4())});
}

// Count the cells that differ between two panels of equal shape.
int diff_count(const ExpertPanel& a, const ExpertPanel& b) {
  int diffs = 0;
  const int n = a.alternative_count();
  for (int h = 0; h < a.expert_count(); ++h) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (a.relation(h).cell(i, k) != b.relation(h).cell(i, k)) ++diffs;
      }
    }
  }
  return diffs;
}

}  // namespace

TEST_CASE("cost is one minus the blended level") {
  CHECK(cost(completed_panel(), {0.65, 0.89}) ==
        doctest::Approx(kExpectedCost).epsilon(1e-9));
  CHECK(cost(spv_panel(), {0.65, 0.89}) ==
        doctest::Approx(1.0 - kSpvCcl).epsilon(1e-9));

  const CompleteFpr fpr = CompleteFpr::from_rows(
      {{0.5, 0.625, 0.75}, {0.375, 0.5, 0.625}, {0.25, 0.375, 0.5}});
  CHECK(cost(ExpertPanel({fpr, fpr}), {}) == doctest::Approx(0.0));
}

TEST_CASE("neighbor perturbs exactly one off-diagonal cell") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  std::mt19937_64 rng(42);
  for (int round = 0; round < 200; ++round) {
    const ExpertPanel moved = neighbor(panel, rng, params);
    CHECK(diff_count(panel, moved) == 1);
    for (int h = 0; h < moved.expert_count(); ++h) {
      const CompleteFpr& rel = moved.relation(h);
      for (int i = 0; i < 4; ++i) {
        CHECK(rel.cell(i, i) == 0.5);
        for (int k = 0; k < 4; ++k) {
          CHECK(rel.cell(i, k) >= 0.0);
          CHECK(rel.cell(i, k) <= 1.0);
          if (rel.cell(i, k) != panel.relation(h).cell(i, k)) {
            // The freshly drawn value must sit on the configured grid.
            const double scaled = rel.cell(i, k) / params.value_grid;
            CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
          }
        }
      }
    }
  }
  // The input panel is never mutated.
  CHECK(diff_count(panel, completed_panel()) == 0);
}

TEST_CASE("neighbor is deterministic for a fixed generator state") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  std::mt19937_64 a(7), b(7);
  for (int round = 0; round < 50; ++round) {
    const ExpertPanel x = neighbor(panel, a, params);
    const ExpertPanel y = neighbor(panel, b, params);
    CHECK(diff_count(x, y) == 0);
  }
}

TEST_CASE("neighbor can keep reciprocity when asked") {
  Grid rows(4, std::vector<double>(4, 0.5));
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      if (i < k) {
        rows[i][k] = 0.7;
        rows[k][i] = 0.3;
      }
    }
  }
  const CompleteFpr rel = CompleteFpr::from_rows(rows);
  const ExpertPanel panel({rel, rel});
  SaParams params;
  params.enforce_reciprocity = true;
  std::mt19937_64 rng(3);
  for (int round = 0; round < 100; ++round) {
    const ExpertPanel moved = neighbor(panel, rng, params);
    CHECK(diff_count(panel, moved) == 2);
    for (int h = 0; h < 2; ++h) {
      for (int i = 0; i < 4; ++i) {
        for (int k = i + 1; k < 4; ++k) {
          CHECK(moved.relation(h).cell(i, k) + moved.relation(h).cell(k, i) ==
                doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("SaParams validation rejects out-of-range settings") {
  const auto expect_invalid = [](auto mutate) {
    SaParams params;
    mutate(params);
    check_error(ErrorCode::kInvalidParams, [&] { params.validate(); });
  };
  SaParams good;
  good.validate();  // must not throw

  expect_invalid([](SaParams& p) { p.initial_temp = 0.0; });
  expect_invalid([](SaParams& p) { p.initial_temp = -1.0; });
  expect_invalid([](SaParams& p) { p.fast_cool_factor = 0.0; });
  expect_invalid([](SaParams& p) { p.fast_cool_factor = 1.0; });
  expect_invalid([](SaParams& p) { p.slow_cool_factor = 1.0; });
  expect_invalid([](SaParams& p) { p.fast_cool_factor = 0.97; });  // >= slow
  expect_invalid([](SaParams& p) { p.fast_cool_ratio = 0.0; });
  expect_invalid([](SaParams& p) { p.fast_cool_ratio = 1.5; });
  expect_invalid([](SaParams& p) { p.freeze_ratio = -0.1; });
  expect_invalid([](SaParams& p) { p.freeze_ratio = 0.6; });  // >= fast ratio
  expect_invalid([](SaParams& p) { p.freeze_limit = 0; });
  expect_invalid([](SaParams& p) { p.stage_size_factor = 0; });
  expect_invalid([](SaParams& p) { p.move_width = 0.0; });
  expect_invalid([](SaParams& p) { p.move_width = 1.5; });
  expect_invalid([](SaParams& p) { p.value_grid = -0.01; });
  expect_invalid([](SaParams& p) { p.value_grid = 0.5; });  // > move width
  expect_invalid([](SaParams& p) { p.max_trials = 0; });
}

TEST_CASE("anneal lifts the example panel over the threshold") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  params.seed = 1;
  const WeightConfig weights{0.65, 0.89};
  const OptimizationResult result = anneal(panel, weights, params);

  CHECK(result.termination == Termination::kThresholdReached);
  CHECK(result.best_ccl >= weights.gamma);
  CHECK(result.best_cost == doctest::Approx(1.0 - result.best_ccl).epsilon(1e-12));
  CHECK(result.trials_used > 0);
  CHECK(result.trials_used <= params.max_trials);

  // The reported best panel must reproduce the reported level.
  const AnalysisReport check = analyze_panel(result.best_panel, weights);
  CHECK(check.ccl == doctest::Approx(result.best_ccl).epsilon(1e-12));

  // Consensus must not be sacrificed on a successful run.
  const double cr_before = analyze_panel(panel, weights).consensus.relation_consensus;
  CHECK(check.consensus.relation_consensus >= cr_before - 1e-12);

  // The recorded best-cost track never increases.
  REQUIRE(!result.trace.empty());
  for (std::size_t t = 1; t < result.trace.size(); ++t) {
    CHECK(result.trace[t].best_cost <= result.trace[t - 1].best_cost + 1e-15);
  }
  CHECK(result.trace.back().best_cost ==
        doctest::Approx(result.best_cost).epsilon(1e-12));
}

TEST_CASE("anneal returns immediately when the panel already qualifies") {
  const ExpertPanel panel = completed_panel();
  const OptimizationResult result = anneal(panel, {0.65, 0.5}, SaParams{});
  CHECK(result.termination == Termination::kThresholdReached);
  CHECK(result.trials_used == 0);
  CHECK(result.best_ccl == doctest::Approx(kExpectedCcl).epsilon(1e-9));
  CHECK(diff_count(result.best_panel, panel) == 0);
  REQUIRE(result.trace.size() == 1);
  CHECK(result.trace[0].trial == 0);
}

TEST_CASE("anneal stops at the trial cap or freezes on impossible targets") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  params.seed = 5;
  params.max_trials = 2000;
  const OptimizationResult result = anneal(panel, {0.65, 1.0}, params);
  CHECK(result.termination != Termination::kThresholdReached);
  CHECK(result.best_ccl < 1.0);
  CHECK(result.trials_used <= 2000);
  // Even a failed search never makes the best tracked panel worse.
  CHECK(result.best_cost <= doctest::Approx(kExpectedCost).epsilon(1e-9));
}

TEST_CASE("anneal can run to a genuine freeze") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  params.seed = 11;
  params.initial_temp = 1e-12;  // essentially greedy: acceptances dry up fast
  params.freeze_limit = 2;
  const OptimizationResult result = anneal(panel, {0.65, 1.0}, params);
  CHECK(result.termination == Termination::kFrozen);
  CHECK(result.trials_used < SaParams{}.max_trials);
}

TEST_CASE("anneal is reproducible for a fixed seed") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  params.seed = 9;
  const WeightConfig weights{0.65, 0.89};
  const OptimizationResult a = anneal(panel, weights, params);
  const OptimizationResult b = anneal(panel, weights, params);
  CHECK(a.best_ccl == b.best_ccl);
  CHECK(a.trials_used == b.trials_used);
  CHECK(a.termination == b.termination);
  CHECK(diff_count(a.best_panel, b.best_panel) == 0);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    CHECK(a.trace[t].trial == b.trace[t].trial);
    CHECK(a.trace[t].temperature == b.trace[t].temperature);
    CHECK(a.trace[t].current_cost == b.trace[t].current_cost);
    CHECK(a.trace[t].best_cost == b.trace[t].best_cost);
  }

  SaParams other = params;
  other.seed = 10;
  const OptimizationResult c = anneal(panel, weights, other);
  CHECK((c.trials_used != a.trials_used || c.best_ccl != a.best_ccl ||
         diff_count(a.best_panel, c.best_panel) != 0));
}

TEST_CASE("suggest_changes is empty when nothing moved") {
  const ExpertPanel panel = completed_panel();
  CHECK(suggest_changes(panel, panel).empty());
}

TEST_CASE("suggest_changes lists moved cells grouped by expert") {
  const ExpertPanel before({CompleteFpr::from_rows(cp1_printed()),
                            CompleteFpr::from_rows(cp2_printed()),
                            CompleteFpr::from_rows(cp3_printed()),
                            CompleteFpr::from_rows(cp4_printed())});
  const ExpertPanel after = spv_panel();
  const auto changes = suggest_changes(before, after, 0.05);
  REQUIRE(!changes.empty());

  bool found = false;
  for (const SuggestedChange& change : changes) {
    if (change.expert == 0 && change.row == 0 && change.col == 1) {
      found = true;
      CHECK(change.original == doctest::Approx(0.33));
      CHECK(change.suggested == doctest::Approx(0.03));
    }
    CHECK(std::abs(change.suggested - change.original) > 0.05);
  }
  CHECK(found);

  // Ordering: ascending expert, then descending magnitude within an expert.
  for (std::size_t idx = 1; idx < changes.size(); ++idx) {
    const auto& prev = changes[idx - 1];
    const auto& cur = changes[idx];
    CHECK(prev.expert <= cur.expert);
    if (prev.expert == cur.expert) {
      CHECK(std::abs(prev.suggested - prev.original) >=
            std::abs(cur.suggested - cur.original) - 1e-15);
    }
  }

  // A huge threshold filters everything out.
  CHECK(suggest_changes(before, after, 1.0).empty());
}

TEST_CASE("suggest_changes threshold is strict") {
  const CompleteFpr rel = CompleteFpr::from_rows(
      {{0.5, 0.75, 0.25}, {0.25, 0.5, 0.75}, {0.75, 0.25, 0.5}});
  const ExpertPanel base({rel, rel});
  const ExpertPanel moved = base.with_relation(1, rel.with_cell(2, 0, 0.5));
  // |0.5 - 0.75| is exactly 0.25; a matching threshold must exclude it.
  CHECK(suggest_changes(base, moved, 0.25).empty());
  const auto hits = suggest_changes(base, moved, 0.2499);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].expert == 1);
  CHECK(hits[0].row == 2);
  CHECK(hits[0].col == 0);
  CHECK(hits[0].original == 0.75);
  CHECK(hits[0].suggested == 0.5);
}

TEST_CASE("suggest_changes validates its inputs") {
  const ExpertPanel panel = completed_panel();
  const CompleteFpr small = CompleteFpr::from_rows(
      {{0.5, 0.625, 0.75}, {0.375, 0.5, 0.625}, {0.25, 0.375, 0.5}});
  check_error(ErrorCode::kShapeMismatch, [&] {
    suggest_changes(panel, ExpertPanel({small, small}));
  });
  check_error(ErrorCode::kInvalidParams,
              [&] { suggest_changes(panel, panel, -0.1); });
}

TEST_CASE("anneal_with_restarts keeps the best of several seeds") {
  const ExpertPanel panel = completed_panel();
  SaParams params;
  params.seed = 21;
  const WeightConfig weights{0.65, 0.89};
  const MultiStartResult multi = anneal_with_restarts(panel, weights, params, 3);
  REQUIRE(multi.outcomes.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(multi.outcomes[r].seed == 21 + r);
  }
  for (const RestartOutcome& outcome : multi.outcomes) {
    CHECK(multi.best.best_ccl >= outcome.best_ccl - 1e-15);
  }
  check_error(ErrorCode::kInvalidParams,
              [&] { anneal_with_restarts(panel, weights, params, 0); });
}
