#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "concord/annealer.hpp"
#include "concord/fpr.hpp"

namespace concord {

// The on-disk shape of a panel: a JSON document with possibly missing
// matrix cells (null), optional weights and optional annealing settings.
// This layer stays permissive -- a document may hold a single expert or
// incomplete matrices -- and the strict panel invariants are enforced when
// the document is turned into core types.

// Annealing settings carried by a document.  Every field is optional; apply()
// lays the present ones over a base parameter set.
struct SaOverrides {
  std::optional<double> initial_temp;
  std::optional<double> fast_cool_factor;
  std::optional<double> slow_cool_factor;
  std::optional<double> fast_cool_ratio;
  std::optional<double> freeze_ratio;
  std::optional<int> freeze_limit;
  std::optional<int> stage_size_factor;
  std::optional<double> move_width;
  std::optional<double> value_grid;
  std::optional<bool> enforce_reciprocity;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_trials;

  SaParams apply(SaParams base) const;
  bool any() const;
};

struct ExpertDocument {
  std::string id;
  OptionalGrid matrix;
};

struct PanelDocument {
  std::vector<std::string> alternatives;  // may be empty: defaults to x1..xn
  std::vector<ExpertDocument> experts;
  std::optional<double> delta;
  std::optional<double> gamma;
  SaOverrides sa;

  bool is_complete() const;  // no missing matrix cell anywhere

  // Validates every matrix (shape, ranges, diagonal) and checks that all
  // experts and the alternatives list agree on the dimension.
  std::vector<IncompleteFpr> validate_relations() const;
};

// Parsing throws kParseError with a pointer to the offending key; reading
// throws kIoError when the file cannot be opened.
PanelDocument parse_panel_text(const std::string& json_text);
PanelDocument load_panel_file(const std::filesystem::path& path);

std::string panel_to_json(const PanelDocument& doc);

// Writes via a temporary file in the target directory plus an atomic
// rename, so a crash never leaves a half-written document behind.
void save_panel_file(const PanelDocument& doc,
                     const std::filesystem::path& path);

// Document for a fully known panel, labels included.  Weights and sa are
// left unset.
PanelDocument to_document(const ExpertPanel& panel);

// Copy of `doc` with the matrices replaced by complete relations (labels,
// ids, weights and sa settings are kept).  Sizes must match.
PanelDocument with_matrices(PanelDocument doc,
                            const std::vector<CompleteFpr>& relations);

// Validates, completes every relation, and assembles the strict panel type.
ExpertPanel assemble_panel(const PanelDocument& doc);

// Random panel for experiments: m experts over n alternatives.  Each expert
// starts from an additively consistent relation (derived from a random value
// vector), optionally perturbed by uniform noise in [-noise, noise], and
// then has floor(missing_fraction * n * (n-1)) off-diagonal cells blanked.
// Cells are only blanked when the remainder still determines the full
// relation, so the result is always completable; if the quota cannot be met
// that way, throws kInfeasibleMask.
//
// The underlying complete matrices depend only on (n, m, noise, seed), not
// on missing_fraction, so a generate-blank-reconstruct round trip can be
// checked against a second run with missing_fraction = 0.
PanelDocument generate_panel(int n, int m, double missing_fraction,
                             double noise, std::uint64_t seed);

}  // namespace concord
