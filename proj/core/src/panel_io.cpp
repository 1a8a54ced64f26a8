#include "concord/panel_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "concord/completion.hpp"
#include "concord/detail/rng.hpp"

namespace concord {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

double read_number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + " must be a number");
  return j.get<double>();
}

int read_int(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where + " must be an integer");
  return j.get<int>();
}

std::uint64_t read_uint(const ordered_json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    parse_fail(where + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool read_bool(const ordered_json& j, const std::string& where) {
  if (!j.is_boolean()) parse_fail(where + " must be a boolean");
  return j.get<bool>();
}

SaOverrides read_sa(const ordered_json& j) {
  if (!j.is_object()) parse_fail("\"sa\" must be an object");
  SaOverrides sa;
  for (const auto& [key, value] : j.items()) {
    const std::string where = "sa." + key;
    if (key == "initial_temp") {
      sa.initial_temp = read_number(value, where);
    } else if (key == "fast_cool_factor") {
      sa.fast_cool_factor = read_number(value, where);
    } else if (key == "slow_cool_factor") {
      sa.slow_cool_factor = read_number(value, where);
    } else if (key == "fast_cool_ratio") {
      sa.fast_cool_ratio = read_number(value, where);
    } else if (key == "freeze_ratio") {
      sa.freeze_ratio = read_number(value, where);
    } else if (key == "freeze_limit") {
      sa.freeze_limit = read_int(value, where);
    } else if (key == "stage_size_factor") {
      sa.stage_size_factor = read_int(value, where);
    } else if (key == "move_width") {
      sa.move_width = read_number(value, where);
    } else if (key == "value_grid") {
      sa.value_grid = read_number(value, where);
    } else if (key == "enforce_reciprocity") {
      sa.enforce_reciprocity = read_bool(value, where);
    } else if (key == "seed") {
      sa.seed = read_uint(value, where);
    } else if (key == "max_trials") {
      sa.max_trials = read_uint(value, where);
    } else {
      // A typo here would otherwise silently fall back to defaults.
      parse_fail("unknown key \"" + where + "\"");
    }
  }
  return sa;
}

OptionalGrid read_matrix(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + " must be an array of rows");
  OptionalGrid grid;
  grid.reserve(j.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!row.is_array()) parse_fail(row_where + " must be an array");
    std::vector<std::optional<double>> cells;
    cells.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c];
      if (cell.is_null()) {
        cells.push_back(std::nullopt);
      } else if (cell.is_number()) {
        cells.push_back(cell.get<double>());
      } else {
        parse_fail(row_where + "[" + std::to_string(c) +
                   "] must be a number or null");
      }
    }
    grid.push_back(std::move(cells));
  }
  return grid;
}

ordered_json matrix_to_json(const OptionalGrid& matrix) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : matrix) {
    ordered_json cells = ordered_json::array();
    for (const auto& cell : row) {
      if (cell) {
        cells.push_back(*cell);
      } else {
        cells.push_back(nullptr);
      }
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

OptionalGrid grid_of(const CompleteFpr& relation) {
  const int n = relation.size();
  OptionalGrid grid(static_cast<std::size_t>(n),
                    std::vector<std::optional<double>>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) grid[i][k] = relation.cell(i, k);
  }
  return grid;
}

// True when the known cells propagate to the whole relation: a missing pair
// becomes estimable once any third alternative supplies one of the three
// source-cell combinations.
bool completable(const std::vector<char>& known, int n) {
  std::vector<char> mask = known;
  const auto at = [&](int i, int k) -> char& {
    return mask[static_cast<std::size_t>(i) * n + k];
  };
  bool progress = true;
  while (progress) {
    progress = false;
    bool all_known = true;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (i == k || at(i, k)) continue;
        bool estimable = false;
        for (int j = 0; j < n && !estimable; ++j) {
          if (j == i || j == k) continue;
          estimable = (at(i, j) && at(j, k)) || (at(j, k) && at(j, i)) ||
                      (at(i, j) && at(k, j));
        }
        if (estimable) {
          at(i, k) = 1;
          progress = true;
        } else {
          all_known = false;
        }
      }
    }
    if (all_known) return true;
  }
  return false;
}

}  // namespace

SaParams SaOverrides::apply(SaParams base) const {
  if (initial_temp) base.initial_temp = *initial_temp;
  if (fast_cool_factor) base.fast_cool_factor = *fast_cool_factor;
  if (slow_cool_factor) base.slow_cool_factor = *slow_cool_factor;
  if (fast_cool_ratio) base.fast_cool_ratio = *fast_cool_ratio;
  if (freeze_ratio) base.freeze_ratio = *freeze_ratio;
  if (freeze_limit) base.freeze_limit = *freeze_limit;
  if (stage_size_factor) base.stage_size_factor = *stage_size_factor;
  if (move_width) base.move_width = *move_width;
  if (value_grid) base.value_grid = *value_grid;
  if (enforce_reciprocity) base.enforce_reciprocity = *enforce_reciprocity;
  if (seed) base.seed = *seed;
  if (max_trials) base.max_trials = *max_trials;
  return base;
}

bool SaOverrides::any() const {
  return initial_temp || fast_cool_factor || slow_cool_factor ||
         fast_cool_ratio || freeze_ratio || freeze_limit ||
         stage_size_factor || move_width || value_grid ||
         enforce_reciprocity || seed || max_trials;
}

bool PanelDocument::is_complete() const {
  for (const auto& expert : experts) {
    for (const auto& row : expert.matrix) {
      for (const auto& cell : row) {
        if (!cell) return false;
      }
    }
  }
  return true;
}

std::vector<IncompleteFpr> PanelDocument::validate_relations() const {
  if (experts.empty()) {
    throw Error(ErrorCode::kTooFewExperts, "document contains no experts");
  }
  std::vector<IncompleteFpr> relations;
  relations.reserve(experts.size());
  for (const auto& expert : experts) {
    relations.push_back(validate_incomplete(expert.matrix));
  }
  const int n = relations.front().size();
  for (const auto& r : relations) {
    if (r.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expert matrices disagree on the number of alternatives (" +
                      std::to_string(r.size()) + " vs " + std::to_string(n) +
                      ")");
    }
  }
  if (!alternatives.empty() && static_cast<int>(alternatives.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(alternatives.size()) +
                    " alternative labels for " + std::to_string(n) +
                    " alternatives");
  }
  return relations;
}

PanelDocument parse_panel_text(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_fail("top level must be an object");

  PanelDocument doc;
  if (j.contains("alternatives")) {
    const auto& alts = j["alternatives"];
    if (!alts.is_array()) parse_fail("\"alternatives\" must be an array");
    for (const auto& a : alts) {
      if (!a.is_string()) parse_fail("\"alternatives\" entries must be strings");
      doc.alternatives.push_back(a.get<std::string>());
    }
  }

  if (!j.contains("experts")) parse_fail("missing \"experts\" array");
  const auto& experts = j["experts"];
  if (!experts.is_array() || experts.empty()) {
    parse_fail("\"experts\" must be a non-empty array");
  }
  for (std::size_t e = 0; e < experts.size(); ++e) {
    const auto& entry = experts[e];
    const std::string where = "experts[" + std::to_string(e) + "]";
    if (!entry.is_object()) parse_fail(where + " must be an object");
    ExpertDocument expert;
    if (entry.contains("id")) {
      if (!entry["id"].is_string()) parse_fail(where + ".id must be a string");
      expert.id = entry["id"].get<std::string>();
    } else {
      expert.id = "e" + std::to_string(e + 1);
    }
    if (!entry.contains("matrix")) parse_fail(where + " is missing \"matrix\"");
    expert.matrix = read_matrix(entry["matrix"], where + ".matrix");
    doc.experts.push_back(std::move(expert));
  }

  if (j.contains("weights")) {
    const auto& weights = j["weights"];
    if (!weights.is_object()) parse_fail("\"weights\" must be an object");
    if (weights.contains("delta")) {
      doc.delta = read_number(weights["delta"], "weights.delta");
    }
    if (weights.contains("gamma")) {
      doc.gamma = read_number(weights["gamma"], "weights.gamma");
    }
  }

  if (j.contains("sa")) doc.sa = read_sa(j["sa"]);
  return doc;
}

PanelDocument load_panel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  }
  return parse_panel_text(buffer.str());
}

std::string panel_to_json(const PanelDocument& doc) {
  ordered_json j;
  if (!doc.alternatives.empty()) j["alternatives"] = doc.alternatives;
  ordered_json experts = ordered_json::array();
  for (const auto& expert : doc.experts) {
    ordered_json entry;
    entry["id"] = expert.id;
    entry["matrix"] = matrix_to_json(expert.matrix);
    experts.push_back(std::move(entry));
  }
  j["experts"] = std::move(experts);
  if (doc.delta || doc.gamma) {
    ordered_json weights;
    if (doc.delta) weights["delta"] = *doc.delta;
    if (doc.gamma) weights["gamma"] = *doc.gamma;
    j["weights"] = std::move(weights);
  }
  if (doc.sa.any()) {
    ordered_json sa;
    if (doc.sa.initial_temp) sa["initial_temp"] = *doc.sa.initial_temp;
    if (doc.sa.fast_cool_factor) sa["fast_cool_factor"] = *doc.sa.fast_cool_factor;
    if (doc.sa.slow_cool_factor) sa["slow_cool_factor"] = *doc.sa.slow_cool_factor;
    if (doc.sa.fast_cool_ratio) sa["fast_cool_ratio"] = *doc.sa.fast_cool_ratio;
    if (doc.sa.freeze_ratio) sa["freeze_ratio"] = *doc.sa.freeze_ratio;
    if (doc.sa.freeze_limit) sa["freeze_limit"] = *doc.sa.freeze_limit;
    if (doc.sa.stage_size_factor) sa["stage_size_factor"] = *doc.sa.stage_size_factor;
    if (doc.sa.move_width) sa["move_width"] = *doc.sa.move_width;
    if (doc.sa.value_grid) sa["value_grid"] = *doc.sa.value_grid;
    if (doc.sa.enforce_reciprocity) sa["enforce_reciprocity"] = *doc.sa.enforce_reciprocity;
    if (doc.sa.seed) sa["seed"] = *doc.sa.seed;
    if (doc.sa.max_trials) sa["max_trials"] = *doc.sa.max_trials;
    j["sa"] = std::move(sa);
  }
  return j.dump(2) + "\n";
}

void save_panel_file(const PanelDocument& doc,
                     const std::filesystem::path& path) {
  const std::string text = panel_to_json(doc);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot open " + tmp.string());
    }
    out << text;
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot replace " + path.string() + ": " +
                                         ec.message());
  }
}

PanelDocument to_document(const ExpertPanel& panel) {
  PanelDocument doc;
  doc.alternatives = panel.alternatives();
  for (int h = 0; h < panel.expert_count(); ++h) {
    doc.experts.push_back({panel.expert_ids()[static_cast<std::size_t>(h)],
                           grid_of(panel.relation(h))});
  }
  return doc;
}

PanelDocument with_matrices(PanelDocument doc,
                            const std::vector<CompleteFpr>& relations) {
  if (relations.size() != doc.experts.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(relations.size()) + " relations for " +
                    std::to_string(doc.experts.size()) + " experts");
  }
  for (std::size_t e = 0; e < relations.size(); ++e) {
    doc.experts[e].matrix = grid_of(relations[e]);
  }
  return doc;
}

ExpertPanel assemble_panel(const PanelDocument& doc) {
  std::vector<IncompleteFpr> incomplete = doc.validate_relations();
  std::vector<CompleteFpr> completed = complete_all(incomplete);
  std::vector<std::string> ids;
  ids.reserve(doc.experts.size());
  for (const auto& expert : doc.experts) ids.push_back(expert.id);
  return ExpertPanel(doc.alternatives, std::move(ids), std::move(completed));
}

PanelDocument generate_panel(int n, int m, double missing_fraction,
                             double noise, std::uint64_t seed) {
  if (n < 3) {
    throw Error(ErrorCode::kTooFewAlternatives,
                "a generated panel needs at least 3 alternatives, got " +
                    std::to_string(n));
  }
  if (m < 2) {
    throw Error(ErrorCode::kTooFewExperts,
                "a generated panel needs at least 2 experts, got " +
                    std::to_string(m));
  }
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "missing_fraction must lie in [0, 1)");
  }
  if (!(noise >= 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "noise must not be negative");
  }

  std::mt19937_64 rng(seed);

  // Phase 1 -- values.  Drawn for all experts before any blanking so that
  // the complete matrices do not depend on missing_fraction (see header).
  // A value vector in [0, 0.5) keeps every 0.5 + u_i - u_k inside (0, 1),
  // which makes each base relation additively consistent as written, with
  // no clamping distortion.
  std::vector<OptionalGrid> matrices;
  matrices.reserve(static_cast<std::size_t>(m));
  for (int h = 0; h < m; ++h) {
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = 0.5 * detail::uniform_unit(rng);
    OptionalGrid grid(static_cast<std::size_t>(n),
                      std::vector<std::optional<double>>(n));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (i == k) {
          grid[i][k] = kIndifference;
          continue;
        }
        double value = 0.5 + u[static_cast<std::size_t>(i)] -
                       u[static_cast<std::size_t>(k)];
        if (noise > 0.0) {
          value = std::clamp(value + detail::uniform_symmetric(rng, noise),
                             0.0, 1.0);
        }
        grid[i][k] = value;
      }
    }
    matrices.push_back(std::move(grid));
  }

  // Phase 2 -- blanking.  Cells are removed in shuffled order, but only
  // while the rest still determines the relation.
  const int target = static_cast<int>(missing_fraction * n * (n - 1));
  for (int h = 0; h < m; ++h) {
    std::vector<std::pair<int, int>> order;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (i != k) order.emplace_back(i, k);
      }
    }
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1],
                order[static_cast<std::size_t>(
                    detail::uniform_index(rng, static_cast<int>(i)))]);
    }

    std::vector<char> known(static_cast<std::size_t>(n) * n, 1);
    int blanked = 0;
    for (const auto& [i, k] : order) {
      if (blanked == target) break;
      known[static_cast<std::size_t>(i) * n + k] = 0;
      if (completable(known, n)) {
        matrices[static_cast<std::size_t>(h)][i][k] = std::nullopt;
        ++blanked;
      } else {
        known[static_cast<std::size_t>(i) * n + k] = 1;
      }
    }
    if (blanked < target) {
      throw Error(ErrorCode::kInfeasibleMask,
                  "cannot blank " + std::to_string(target) +
                      " cells of expert " + std::to_string(h + 1) +
                      " and keep the relation completable");
    }
  }

  PanelDocument doc;
  for (int i = 1; i <= n; ++i) doc.alternatives.push_back("x" + std::to_string(i));
  for (int h = 0; h < m; ++h) {
    doc.experts.push_back({"e" + std::to_string(h + 1),
                           std::move(matrices[static_cast<std::size_t>(h)])});
  }
  return doc;
}

}  // namespace concord
