#include "concord/metrics.hpp"

#include <cmath>
#include <string>

namespace concord {
namespace {

// Scales the raw three-family deviation mean into [0, 1]: a deviation can
// reach 1.5 (estimate at -0.5 or 1.5 against a cell at 1 or 0), so 2/3 of
// the mean caps the error at 1.
constexpr double kErrorScale = 2.0 / 3.0;

void check_off_diagonal(int n, int row, int col) {
  if (row < 0 || row >= n || col < 0 || col >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "cell (" + std::to_string(row) + ", " + std::to_string(col) +
                    ") is outside a " + std::to_string(n) + "x" +
                    std::to_string(n) + " relation");
  }
  if (row == col) {
    throw Error(ErrorCode::kDiagonalPair,
                "consistency is only defined for off-diagonal pairs");
  }
}

}  // namespace

PairConsistency consistency_pair(const CompleteFpr& fpr, int row, int col) {
  const int n = fpr.size();
  check_off_diagonal(n, row, col);

  const double observed = fpr.cell(row, col);
  // Mean absolute deviation per estimator family, over the n - 2
  // intermediaries.
  double family1 = 0.0, family2 = 0.0, family3 = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == row || j == col) continue;
    family1 += std::abs(fpr.cell(row, j) + fpr.cell(j, col) - 0.5 - observed);
    family2 += std::abs(fpr.cell(j, col) - fpr.cell(j, row) + 0.5 - observed);
    family3 += std::abs(fpr.cell(row, j) - fpr.cell(col, j) + 0.5 - observed);
  }
  const double denom = static_cast<double>(n - 2);
  const double error =
      kErrorScale * (family1 / denom + family2 / denom + family3 / denom) / 3.0;
  return {error, 1.0 - error};
}

ConsistencyReport consistency_level(const CompleteFpr& fpr) {
  const int n = fpr.size();
  ConsistencyReport report;
  report.pair_errors.assign(static_cast<std::size_t>(n),
                            std::vector<double>(n, 0.0));
  report.pair_levels.assign(static_cast<std::size_t>(n),
                            std::vector<double>(n, 1.0));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      const auto pc = consistency_pair(fpr, i, k);
      report.pair_errors[i][k] = pc.error;
      report.pair_levels[i][k] = pc.level;
      sum += pc.level;
    }
  }
  report.relation_level = sum / static_cast<double>(n * (n - 1));
  return report;
}

double relation_consistency(const CompleteFpr& fpr) {
  const int n = fpr.size();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i != k) sum += consistency_pair(fpr, i, k).level;
    }
  }
  return sum / static_cast<double>(n * (n - 1));
}

double global_consistency(const std::vector<double>& relation_levels) {
  if (relation_levels.empty()) {
    throw Error(ErrorCode::kEmptyList, "no consistency levels to average");
  }
  double sum = 0.0;
  for (double level : relation_levels) {
    if (!(level >= 0.0 && level <= 1.0)) {
      throw Error(ErrorCode::kOutOfRangeValue,
                  "consistency level " + std::to_string(level) +
                      " is outside [0, 1]");
    }
    sum += level;
  }
  return sum / static_cast<double>(relation_levels.size());
}

Grid pair_similarity(const CompleteFpr& a, const CompleteFpr& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "relations of size " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " cannot be compared");
  }
  const int n = a.size();
  Grid sm(static_cast<std::size_t>(n), std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i != k) sm[i][k] = 1.0 - std::abs(a.cell(i, k) - b.cell(i, k));
    }
  }
  return sm;
}

Grid collective_similarity(const ExpertPanel& panel) {
  return collective_similarity(panel.relations());
}

Grid collective_similarity(const std::vector<CompleteFpr>& relations) {
  const int m = static_cast<int>(relations.size());
  if (m < 2) {
    throw Error(ErrorCode::kTooFewExperts,
                "similarity across a panel needs at least 2 relations, got " +
                    std::to_string(m));
  }
  const int n = relations.front().size();
  Grid sum(static_cast<std::size_t>(n), std::vector<double>(n, 0.0));
  for (int h = 0; h < m; ++h) {
    for (int l = h + 1; l < m; ++l) {
      const Grid sm = pair_similarity(relations[h], relations[l]);
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) sum[i][k] += sm[i][k];
      }
    }
  }
  const double pairs = static_cast<double>(m) * (m - 1) / 2.0;
  for (auto& row : sum) {
    for (double& v : row) v /= pairs;
  }
  return sum;
}

ConsensusReport consensus_degrees(const Grid& collective_sm) {
  const int n = static_cast<int>(collective_sm.size());
  for (const auto& row : collective_sm) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(ErrorCode::kNonSquareGrid,
                  "similarity grid row length " + std::to_string(row.size()) +
                      " does not match row count " + std::to_string(n));
    }
  }
  if (n < 2) {
    throw Error(ErrorCode::kTooFewAlternatives,
                "consensus needs at least 2 alternatives, got " +
                    std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i != k && !(collective_sm[i][k] >= 0.0 && collective_sm[i][k] <= 1.0)) {
        throw Error(ErrorCode::kOutOfRangeValue,
                    "similarity value " + std::to_string(collective_sm[i][k]) +
                        " is outside [0, 1]");
      }
    }
  }

  ConsensusReport report;
  report.collective_sm = collective_sm;
  report.alternative_consensus.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    // Both orientations of every pair that involves alternative i.
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != i) sum += collective_sm[i][k] + collective_sm[k][i];
    }
    const double ca = sum / (2.0 * static_cast<double>(n - 1));
    report.alternative_consensus[i] = ca;
    total += ca;
  }
  report.relation_consensus = total / static_cast<double>(n);
  return report;
}

double panel_consensus(const std::vector<CompleteFpr>& relations) {
  return consensus_degrees(collective_similarity(relations)).relation_consensus;
}

double ccl(double consistency, double consensus, const WeightConfig& weights) {
  weights.validate();
  if (!(consistency >= 0.0 && consistency <= 1.0)) {
    throw Error(ErrorCode::kOutOfRangeValue,
                "consistency " + std::to_string(consistency) +
                    " is outside [0, 1]");
  }
  if (!(consensus >= 0.0 && consensus <= 1.0)) {
    throw Error(ErrorCode::kOutOfRangeValue,
                "consensus " + std::to_string(consensus) +
                    " is outside [0, 1]");
  }
  return (1.0 - weights.delta) * consistency + weights.delta * consensus;
}

AnalysisReport analyze_panel(const ExpertPanel& panel,
                             const WeightConfig& weights) {
  weights.validate();
  AnalysisReport report;
  report.weights = weights;
  report.per_expert.reserve(static_cast<std::size_t>(panel.expert_count()));
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(panel.expert_count()));
  for (int h = 0; h < panel.expert_count(); ++h) {
    report.per_expert.push_back(consistency_level(panel.relation(h)));
    levels.push_back(report.per_expert.back().relation_level);
  }
  report.global_cl = global_consistency(levels);
  report.consensus = consensus_degrees(collective_similarity(panel));
  report.ccl = ccl(report.global_cl, report.consensus.relation_consensus, weights);
  return report;
}

}  // namespace concord
