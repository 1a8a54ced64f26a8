#include "concord/fpr.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace concord {
namespace {

std::string cell_label(int row, int col) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "cell (%d, %d)", row, col);
  return buf;
}

std::vector<std::string> default_labels(const char* prefix, int count) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    labels.push_back(prefix + std::to_string(i));
  }
  return labels;
}

}  // namespace

CompleteFpr::CompleteFpr(int n, std::vector<double> cells)
    : n_(n), cells_(std::move(cells)) {
  if (n_ < 3) {
    throw Error(ErrorCode::kTooFewAlternatives,
                "a preference relation needs at least 3 alternatives, got " +
                    std::to_string(n_));
  }
  if (cells_.size() != static_cast<std::size_t>(n_) * n_) {
    throw Error(ErrorCode::kNonSquareGrid,
                "expected " + std::to_string(n_ * n_) + " cells, got " +
                    std::to_string(cells_.size()));
  }
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const double v = cells_[static_cast<std::size_t>(i) * n_ + k];
      if (!(v >= 0.0 && v <= 1.0)) {  // also rejects NaN
        throw Error(ErrorCode::kOutOfRangeValue,
                    cell_label(i, k) + " = " + std::to_string(v) +
                        " is outside [0, 1]");
      }
      if (i == k && v != kIndifference) {
        throw Error(ErrorCode::kDiagonalConflict,
                    cell_label(i, k) + " must be 0.5, got " +
                        std::to_string(v));
      }
    }
  }
}

CompleteFpr CompleteFpr::from_rows(const Grid& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(ErrorCode::kNonSquareGrid,
                  "row length " + std::to_string(row.size()) +
                      " does not match row count " + std::to_string(n));
    }
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return CompleteFpr(n, std::move(cells));
}

void CompleteFpr::check_pair(int row, int col, bool allow_diagonal) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                cell_label(row, col) + " is outside a " + std::to_string(n_) +
                    "x" + std::to_string(n_) + " relation");
  }
  if (!allow_diagonal && row == col) {
    throw Error(ErrorCode::kDiagonalPair,
                cell_label(row, col) + " is on the diagonal");
  }
}

CompleteFpr CompleteFpr::with_cell(int row, int col, double value) const {
  check_pair(row, col, /*allow_diagonal=*/false);
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kOutOfRangeValue,
                "replacement value " + std::to_string(value) +
                    " is outside [0, 1]");
  }
  CompleteFpr copy = *this;
  copy.cells_[static_cast<std::size_t>(row) * n_ + col] = value;
  return copy;
}

Grid CompleteFpr::rows() const {
  Grid out(static_cast<std::size_t>(n_), std::vector<double>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      out[i][k] = cells_[static_cast<std::size_t>(i) * n_ + k];
    }
  }
  return out;
}

const std::optional<double>& IncompleteFpr::cell(int row, int col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                cell_label(row, col) + " is outside a " + std::to_string(n_) +
                    "x" + std::to_string(n_) + " relation");
  }
  return cells_[static_cast<std::size_t>(row) * n_ + col];
}

int IncompleteFpr::known_count() const noexcept {
  int count = 0;
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      if (i != k && cells_[static_cast<std::size_t>(i) * n_ + k]) ++count;
    }
  }
  return count;
}

int IncompleteFpr::missing_count() const noexcept {
  return n_ * (n_ - 1) - known_count();
}

IncompleteFpr validate_incomplete(const OptionalGrid& raw) {
  const int n = static_cast<int>(raw.size());
  for (const auto& row : raw) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(ErrorCode::kNonSquareGrid,
                  "row length " + std::to_string(row.size()) +
                      " does not match row count " + std::to_string(n));
    }
  }
  if (n < 3) {
    throw Error(ErrorCode::kTooFewAlternatives,
                "a preference relation needs at least 3 alternatives, got " +
                    std::to_string(n));
  }

  std::vector<std::optional<double>> cells(static_cast<std::size_t>(n) * n);
  int known = 0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const auto& v = raw[i][k];
      if (v) {
        if (!(*v >= 0.0 && *v <= 1.0)) {
          throw Error(ErrorCode::kOutOfRangeValue,
                      cell_label(i, k) + " = " + std::to_string(*v) +
                          " is outside [0, 1]");
        }
        if (i == k && *v != kIndifference) {
          throw Error(ErrorCode::kDiagonalConflict,
                      cell_label(i, k) + " must be 0.5, got " +
                          std::to_string(*v));
        }
        if (i != k) ++known;
      }
      cells[static_cast<std::size_t>(i) * n + k] = v;
    }
  }
  // The diagonal is part of the convention, not of the expert's input, so a
  // missing diagonal entry is filled rather than rejected.
  for (int i = 0; i < n; ++i) {
    cells[static_cast<std::size_t>(i) * n + i] = kIndifference;
  }
  if (known == 0) {
    throw Error(ErrorCode::kEmptyRelation,
                "no off-diagonal cell is known; nothing to work from");
  }
  return IncompleteFpr(n, std::move(cells));
}

bool is_additively_consistent(const CompleteFpr& fpr, double tol) {
  const int n = fpr.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const double expected = fpr.cell(i, j) + fpr.cell(j, k) - 0.5;
        if (std::abs(fpr.cell(i, k) - expected) > tol) return false;
      }
    }
  }
  return true;
}

void WeightConfig::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "delta = " + std::to_string(delta) + " is outside [0, 1]");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "gamma = " + std::to_string(gamma) + " is outside [0, 1]");
  }
}

ExpertPanel::ExpertPanel(std::vector<std::string> alternatives,
                         std::vector<std::string> expert_ids,
                         std::vector<CompleteFpr> relations)
    : alternatives_(std::move(alternatives)),
      expert_ids_(std::move(expert_ids)),
      relations_(std::move(relations)) {
  if (relations_.size() < 2) {
    throw Error(ErrorCode::kTooFewExperts,
                "a panel needs at least 2 experts, got " +
                    std::to_string(relations_.size()));
  }
  const int n = relations_.front().size();
  for (const auto& r : relations_) {
    if (r.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expert relations disagree on the number of alternatives (" +
                      std::to_string(r.size()) + " vs " + std::to_string(n) +
                      ")");
    }
  }
  if (alternatives_.empty()) {
    alternatives_ = default_labels("x", n);
  } else if (static_cast<int>(alternatives_.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(alternatives_.size()) +
                    " alternative labels for " + std::to_string(n) +
                    " alternatives");
  }
  if (expert_ids_.empty()) {
    expert_ids_ = default_labels("e", expert_count());
  } else if (expert_ids_.size() != relations_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(expert_ids_.size()) + " expert ids for " +
                    std::to_string(relations_.size()) + " relations");
  }
}

ExpertPanel::ExpertPanel(std::vector<CompleteFpr> relations)
    : ExpertPanel({}, {}, std::move(relations)) {}

const CompleteFpr& ExpertPanel::relation(int expert) const {
  if (expert < 0 || expert >= expert_count()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "expert index " + std::to_string(expert) +
                    " is outside a panel of " + std::to_string(expert_count()));
  }
  return relations_[static_cast<std::size_t>(expert)];
}

ExpertPanel ExpertPanel::with_relation(int expert, CompleteFpr relation) const {
  if (expert < 0 || expert >= expert_count()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "expert index " + std::to_string(expert) +
                    " is outside a panel of " + std::to_string(expert_count()));
  }
  if (relation.size() != alternative_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "replacement relation has " + std::to_string(relation.size()) +
                    " alternatives, panel has " +
                    std::to_string(alternative_count()));
  }
  ExpertPanel copy = *this;
  copy.relations_[static_cast<std::size_t>(expert)] = std::move(relation);
  return copy;
}

}  // namespace concord
