#pragma once

#include <vector>

#include "concord/fpr.hpp"

namespace concord {

// Two orthogonal qualities are measured on a panel:
//  - consistency: how well each expert agrees with themselves (additive
//    transitivity of their own relation);
//  - consensus: how well the experts agree with each other.
// Both are scored in [0, 1], then blended into one figure, ccl.

// Consistency of a single off-diagonal pair: `error` is the mean absolute
// deviation between the cell and its three estimator families (averaged per
// family over intermediaries, then across families, scaled by 2/3 so that
// the worst case maps to 1); `level` = 1 - error.
struct PairConsistency {
  double error;
  double level;
};

PairConsistency consistency_pair(const CompleteFpr& fpr, int row, int col);

// Pairwise detail plus the relation-wide mean.  Diagonal cells are not
// meaningful for either grid; they are fixed at error 0, level 1.
struct ConsistencyReport {
  Grid pair_errors;      // error per off-diagonal pair
  Grid pair_levels;      // 1 - error
  double relation_level; // mean level over the n^2 - n off-diagonal pairs
};

ConsistencyReport consistency_level(const CompleteFpr& fpr);

// Mean level over the off-diagonal pairs, without the grid detail.  Equals
// ConsistencyReport::relation_level; the optimiser's cost loop uses this.
double relation_consistency(const CompleteFpr& fpr);

// Mean of per-expert relation levels.  Throws kEmptyList on empty input and
// kOutOfRangeValue if any level is outside [0, 1].
double global_consistency(const std::vector<double>& relation_levels);

// Similarity between two experts at each pair: 1 - |a_ik - b_ik|.
// Diagonal cells are 1.  Throws kDimensionMismatch on size disagreement.
Grid pair_similarity(const CompleteFpr& a, const CompleteFpr& b);

// Mean similarity over all unordered expert pairs; the collective view of
// how close the panel sits at each cell.  The vector overload exists so the
// optimiser's cost loop can skip panel construction.
Grid collective_similarity(const ExpertPanel& panel);
Grid collective_similarity(const std::vector<CompleteFpr>& relations);

struct ConsensusReport {
  Grid collective_sm;                         // as collective_similarity
  std::vector<double> alternative_consensus;  // ca_i, one per alternative
  double relation_consensus;                  // cr, mean of ca

  // The pair-level consensus degree coincides with the collective
  // similarity value, so the same grid is exposed under both names.
  const Grid& pair_consensus() const noexcept { return collective_sm; }
};

// Aggregates a collective similarity grid: ca_i averages the similarities
// of every pair involving alternative i (both orientations), and cr is the
// mean of the ca values.
ConsensusReport consensus_degrees(const Grid& collective_sm);

// Consensus of a list of complete relations in one call.  The optimiser's
// cost loop uses this.
double panel_consensus(const std::vector<CompleteFpr>& relations);

// Blended score: (1 - delta) * consistency + delta * consensus.
double ccl(double consistency, double consensus, const WeightConfig& weights);

// Everything the engine can say about a panel in one pass.
struct AnalysisReport {
  std::vector<ConsistencyReport> per_expert;
  double global_cl;
  ConsensusReport consensus;
  double ccl;
  WeightConfig weights;
};

AnalysisReport analyze_panel(const ExpertPanel& panel,
                             const WeightConfig& weights);

}  // namespace concord
