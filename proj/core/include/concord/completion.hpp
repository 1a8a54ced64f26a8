#pragma once

#include <vector>

#include "concord/fpr.hpp"

namespace concord {

// Missing cells are reconstructed from additive transitivity.  For a target
// pair (i, k) and any third alternative j, the identity
//   p_ik = p_ij + p_jk - 0.5
// can be rearranged three ways, giving three estimator families:
//   1: p_ij + p_jk - 0.5
//   2: p_jk - p_ji + 0.5
//   3: p_ij - p_kj + 0.5
// Each family contributes one candidate per intermediary j whose required
// source cells are known.

struct Estimate {
  int family;        // 1, 2 or 3, as above
  int intermediary;  // the third alternative j
  double value;      // raw estimate; may fall outside [0, 1]
};

struct EstimateBundle {
  int row = 0;
  int col = 0;
  std::vector<Estimate> estimates;

  bool empty() const noexcept { return estimates.empty(); }

  // Arithmetic mean of the collected estimates.  Throws kEmptyList when the
  // bundle is empty; the mean is NOT clamped -- clamping is the caller's
  // decision and happens once, after averaging.
  double mean() const;
};

// All estimates for pair (row, col) that the currently known cells support.
// Throws kDiagonalPair when row == col and kIndexOutOfRange when either
// index is outside the relation.
EstimateBundle candidate_estimates(const IncompleteFpr& fpr, int row, int col);

// Fills every missing cell by iterating rounds: within one round, every
// still-missing cell with at least one supported estimate receives the mean
// of its estimates, clamped into [0, 1].  Cells filled in the same round see
// only the knowledge available before the round began, so the result does
// not depend on cell traversal order.  Throws kUnestimable if a round makes
// no progress while cells remain missing.
CompleteFpr complete(const IncompleteFpr& fpr);

// Completes each relation independently.  Throws kEmptyList on an empty
// input vector.
std::vector<CompleteFpr> complete_all(const std::vector<IncompleteFpr>& relations);

}  // namespace concord
