#include "concord/completion.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace concord {
namespace {

// Appends the estimates for (i, k) that the knowledge in `cells` supports.
// Shared by candidate_estimates (public, reads an IncompleteFpr) and the
// completion loop (reads its own working copy).
void collect_estimates(const std::vector<std::optional<double>>& cells, int n,
                       int i, int k, std::vector<Estimate>& out) {
  const auto at = [&](int r, int c) -> const std::optional<double>& {
    return cells[static_cast<std::size_t>(r) * n + c];
  };
  for (int j = 0; j < n; ++j) {
    if (j == i || j == k) continue;
    if (at(i, j) && at(j, k)) {
      out.push_back({1, j, *at(i, j) + *at(j, k) - 0.5});
    }
    if (at(j, k) && at(j, i)) {
      out.push_back({2, j, *at(j, k) - *at(j, i) + 0.5});
    }
    if (at(i, j) && at(k, j)) {
      out.push_back({3, j, *at(i, j) - *at(k, j) + 0.5});
    }
  }
}

}  // namespace

double EstimateBundle::mean() const {
  if (estimates.empty()) {
    throw Error(ErrorCode::kEmptyList,
                "no estimates available for cell (" + std::to_string(row) +
                    ", " + std::to_string(col) + ")");
  }
  double sum = 0.0;
  for (const auto& e : estimates) sum += e.value;
  return sum / static_cast<double>(estimates.size());
}

EstimateBundle candidate_estimates(const IncompleteFpr& fpr, int row, int col) {
  const int n = fpr.size();
  if (row < 0 || row >= n || col < 0 || col >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "cell (" + std::to_string(row) + ", " + std::to_string(col) +
                    ") is outside a " + std::to_string(n) + "x" +
                    std::to_string(n) + " relation");
  }
  if (row == col) {
    throw Error(ErrorCode::kDiagonalPair,
                "diagonal cells are fixed at 0.5 and are never estimated");
  }
  EstimateBundle bundle{row, col, {}};
  collect_estimates(fpr.cells(), n, row, col, bundle.estimates);
  return bundle;
}

CompleteFpr complete(const IncompleteFpr& fpr) {
  const int n = fpr.size();
  std::vector<std::optional<double>> cells = fpr.cells();

  std::vector<std::pair<int, int>> missing;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i != k && !cells[static_cast<std::size_t>(i) * n + k]) {
        missing.emplace_back(i, k);
      }
    }
  }

  std::vector<Estimate> scratch;
  while (!missing.empty()) {
    // Estimate strictly against the pre-round state, then apply all values
    // at once: a cell filled in this round must not feed its round-mates.
    std::vector<std::pair<std::size_t, double>> assignments;
    std::vector<std::pair<int, int>> still_missing;
    for (const auto& [i, k] : missing) {
      scratch.clear();
      collect_estimates(cells, n, i, k, scratch);
      if (scratch.empty()) {
        still_missing.emplace_back(i, k);
        continue;
      }
      double sum = 0.0;
      for (const auto& e : scratch) sum += e.value;
      const double value =
          std::clamp(sum / static_cast<double>(scratch.size()), 0.0, 1.0);
      assignments.emplace_back(static_cast<std::size_t>(i) * n + k, value);
    }
    if (assignments.empty()) {
      throw Error(ErrorCode::kUnestimable,
                  std::to_string(missing.size()) +
                      " cell(s) cannot be estimated from the known entries");
    }
    for (const auto& [index, value] : assignments) cells[index] = value;
    missing = std::move(still_missing);
  }

  std::vector<double> values;
  values.reserve(cells.size());
  for (const auto& c : cells) values.push_back(*c);
  return CompleteFpr(n, std::move(values));
}

std::vector<CompleteFpr> complete_all(
    const std::vector<IncompleteFpr>& relations) {
  if (relations.empty()) {
    throw Error(ErrorCode::kEmptyList, "no relations to complete");
  }
  std::vector<CompleteFpr> out;
  out.reserve(relations.size());
  for (const auto& r : relations) out.push_back(complete(r));
  return out;
}

}  // namespace concord
