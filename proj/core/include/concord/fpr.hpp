#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concord/error.hpp"

namespace concord {

// A fuzzy preference relation over n alternatives is an n-by-n matrix of
// degrees in [0, 1]: cell (i, k) states how much alternative i is preferred
// to alternative k, with 0.5 meaning indifference.  The diagonal is pinned
// at 0.5 by convention.

inline constexpr double kIndifference = 0.5;

using Grid = std::vector<std::vector<double>>;
using OptionalGrid = std::vector<std::vector<std::optional<double>>>;

// Fully specified relation.  Immutable after construction; "edits" go
// through with_cell, which returns a modified copy.
class CompleteFpr {
 public:
  // `cells` is a row-major n*n vector.  Throws Error on any violated
  // invariant: n >= 3, every value in [0, 1], diagonal equal to 0.5.
  CompleteFpr(int n, std::vector<double> cells);

  // Convenience for literal matrices in calling code and tests.
  static CompleteFpr from_rows(const Grid& rows);

  int size() const noexcept { return n_; }

  double cell(int row, int col) const {
    check_pair(row, col, /*allow_diagonal=*/true);
    return cells_[static_cast<std::size_t>(row) * n_ + col];
  }

  // Copy with one off-diagonal cell replaced.  Throws kDiagonalPair when
  // row == col and kOutOfRangeValue when value is outside [0, 1].
  CompleteFpr with_cell(int row, int col, double value) const;

  const std::vector<double>& cells() const noexcept { return cells_; }

  Grid rows() const;

  friend bool operator==(const CompleteFpr&, const CompleteFpr&) = default;

 private:
  void check_pair(int row, int col, bool allow_diagonal) const;

  int n_;
  std::vector<double> cells_;
};

// Relation with possibly missing off-diagonal cells.  The diagonal is never
// missing: it is forced to 0.5 during validation.
class IncompleteFpr {
 public:
  int size() const noexcept { return n_; }

  bool known(int row, int col) const { return cell(row, col).has_value(); }

  const std::optional<double>& cell(int row, int col) const;

  const std::vector<std::optional<double>>& cells() const noexcept {
    return cells_;
  }

  // Number of known / missing off-diagonal cells.
  int known_count() const noexcept;
  int missing_count() const noexcept;

 private:
  friend IncompleteFpr validate_incomplete(const OptionalGrid& raw);

  IncompleteFpr(int n, std::vector<std::optional<double>> cells)
      : n_(n), cells_(std::move(cells)) {}

  int n_;
  std::vector<std::optional<double>> cells_;
};

// Validating factory for raw user data (e.g. a parsed JSON matrix).
// Checks, in order: the grid is square, n >= 3 (the estimation step divides
// by n - 2), every present value lies in [0, 1], any present diagonal value
// equals 0.5, and at least one off-diagonal cell is known.  Missing diagonal
// entries are filled with 0.5.
IncompleteFpr validate_incomplete(const OptionalGrid& raw);

// True when every pairwise-distinct triple (i, j, k) satisfies the additive
// transitivity identity p_ik = p_ij + p_jk - 0.5 up to `tol`.
bool is_additively_consistent(const CompleteFpr& fpr, double tol = 1e-9);

// Weights for blending consistency with consensus, and the acceptance bar
// for the blended score.
struct WeightConfig {
  double delta = 0.65;  // weight of consensus in the blended score
  double gamma = 0.89;  // minimum acceptable blended score

  // Throws kInvalidParams unless both lie in [0, 1].
  void validate() const;
};

// A panel of experts, each contributing one complete relation over the same
// alternatives.  Labels default to x1..xn and e1..em when not supplied.
class ExpertPanel {
 public:
  ExpertPanel(std::vector<std::string> alternatives,
              std::vector<std::string> expert_ids,
              std::vector<CompleteFpr> relations);

  // Default labels.
  explicit ExpertPanel(std::vector<CompleteFpr> relations);

  int expert_count() const noexcept {
    return static_cast<int>(relations_.size());
  }
  int alternative_count() const noexcept { return relations_.front().size(); }

  const CompleteFpr& relation(int expert) const;
  const std::vector<CompleteFpr>& relations() const noexcept {
    return relations_;
  }
  const std::vector<std::string>& alternatives() const noexcept {
    return alternatives_;
  }
  const std::vector<std::string>& expert_ids() const noexcept {
    return expert_ids_;
  }

  // Copy with one expert's relation replaced (same dimensions required).
  ExpertPanel with_relation(int expert, CompleteFpr relation) const;

 private:
  std::vector<std::string> alternatives_;
  std::vector<std::string> expert_ids_;
  std::vector<CompleteFpr> relations_;
};

}  // namespace concord
