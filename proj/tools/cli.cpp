#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "concord/annealer.hpp"
#include "concord/completion.hpp"
#include "concord/metrics.hpp"
#include "concord/panel_io.hpp"

namespace concord::cli {
namespace {

using nlohmann::ordered_json;

std::string two_dec(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_file_atomic(const std::string& text,
                       const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot replace " + path.string() + ": " + ec.message());
  }
}

int count_missing(const PanelDocument& doc) {
  int missing = 0;
  for (const auto& expert : doc.experts) {
    for (const auto& row : expert.matrix) {
      for (const auto& cell : row) {
        if (!cell) ++missing;
      }
    }
  }
  return missing;
}

// Weight and annealing flags stay optional so that values from the input
// document win whenever the flag is absent: defaults < document < flags.
struct WeightFlags {
  std::optional<double> delta;
  std::optional<double> gamma;
};

struct SaFlags {
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
};

WeightConfig resolve_weights(const PanelDocument& doc,
                             const WeightFlags& flags) {
  WeightConfig weights;
  if (doc.delta) weights.delta = *doc.delta;
  if (doc.gamma) weights.gamma = *doc.gamma;
  if (flags.delta) weights.delta = *flags.delta;
  if (flags.gamma) weights.gamma = *flags.gamma;
  weights.validate();
  return weights;
}

SaParams resolve_sa(const PanelDocument& doc, const SaFlags& flags) {
  SaParams params = doc.sa.apply(SaParams{});
  if (flags.initial_temp) params.initial_temp = *flags.initial_temp;
  if (flags.fast_cool_factor) params.fast_cool_factor = *flags.fast_cool_factor;
  if (flags.slow_cool_factor) params.slow_cool_factor = *flags.slow_cool_factor;
  if (flags.fast_cool_ratio) params.fast_cool_ratio = *flags.fast_cool_ratio;
  if (flags.freeze_ratio) params.freeze_ratio = *flags.freeze_ratio;
  if (flags.freeze_limit) params.freeze_limit = *flags.freeze_limit;
  if (flags.stage_size_factor) params.stage_size_factor = *flags.stage_size_factor;
  if (flags.move_width) params.move_width = *flags.move_width;
  if (flags.value_grid) params.value_grid = *flags.value_grid;
  if (flags.enforce_reciprocity) params.enforce_reciprocity = *flags.enforce_reciprocity;
  if (flags.seed) params.seed = *flags.seed;
  if (flags.max_trials) params.max_trials = *flags.max_trials;
  params.validate();
  return params;
}

ordered_json grid_json(const Grid& grid, bool null_diagonal) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t k = 0; k < grid[i].size(); ++k) {
      if (null_diagonal && i == k) {
        row.push_back(nullptr);
      } else {
        row.push_back(grid[i][k]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json panel_json(const PanelDocument& doc) {
  return ordered_json::parse(panel_to_json(doc));
}

// The metric block shared by analyze reports and both halves of an optimize
// report.
ordered_json metrics_json(const AnalysisReport& report) {
  ordered_json j;
  ordered_json per_expert = ordered_json::array();
  for (const auto& expert : report.per_expert) {
    per_expert.push_back(expert.relation_level);
  }
  j["per_expert_cl"] = std::move(per_expert);
  j["global_cl"] = report.global_cl;
  j["collective_sm"] = grid_json(report.consensus.collective_sm,
                                 /*null_diagonal=*/true);
  j["ca"] = report.consensus.alternative_consensus;
  j["cr"] = report.consensus.relation_consensus;
  j["ccl"] = report.ccl;
  return j;
}

ordered_json rendered_json(const AnalysisReport& report) {
  ordered_json j;
  ordered_json per_expert = ordered_json::array();
  for (const auto& expert : report.per_expert) {
    per_expert.push_back(two_dec(expert.relation_level));
  }
  j["per_expert_cl"] = std::move(per_expert);
  j["global_cl"] = two_dec(report.global_cl);
  j["cr"] = two_dec(report.consensus.relation_consensus);
  j["ccl"] = two_dec(report.ccl);
  return j;
}

void emit(const ordered_json& report, const std::optional<std::string>& out_path,
          std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path) {
    write_file_atomic(text, *out_path);
  } else {
    out << text;
  }
}

std::string expert_summary(const AnalysisReport& report,
                           const std::vector<std::string>& ids) {
  std::string line;
  for (std::size_t h = 0; h < report.per_expert.size(); ++h) {
    if (!line.empty()) line += "  ";
    line += ids[h] + " " + two_dec(report.per_expert[h].relation_level);
  }
  return line;
}

struct CompleteOptions {
  std::string in_path;
  std::optional<std::string> out_path;
};

int run_complete(const CompleteOptions& opt, std::ostream& out) {
  const PanelDocument doc = load_panel_file(opt.in_path);
  const int missing = count_missing(doc);
  const std::vector<CompleteFpr> completed =
      complete_all(doc.validate_relations());
  const PanelDocument done = with_matrices(doc, completed);
  if (opt.out_path) {
    save_panel_file(done, *opt.out_path);
    out << "completed " << missing << " missing cell(s) across "
        << done.experts.size() << " expert(s); panel written to "
        << *opt.out_path << "\n";
  } else {
    out << panel_to_json(done);
  }
  return 0;
}

struct AnalyzeOptions {
  std::string in_path;
  std::optional<std::string> out_path;
  WeightFlags weights;
};

int run_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const PanelDocument doc = load_panel_file(opt.in_path);
  const int missing = count_missing(doc);
  const ExpertPanel panel = assemble_panel(doc);
  const WeightConfig weights = resolve_weights(doc, opt.weights);
  const AnalysisReport report = analyze_panel(panel, weights);

  ordered_json j;
  j["alternatives"] = panel.alternatives();
  j["experts"] = panel.expert_ids();
  j["weights"] = {{"delta", weights.delta}, {"gamma", weights.gamma}};
  j.update(metrics_json(report));
  j["meets_threshold"] = report.ccl >= weights.gamma;
  j["completed_cells"] = missing;
  j["panel"] = panel_json(to_document(panel));
  j["rendered"] = rendered_json(report);
  emit(j, opt.out_path, out);

  if (opt.out_path) {
    out << "panel: " << panel.expert_count() << " expert(s) x "
        << panel.alternative_count() << " alternatives";
    if (missing > 0) out << " (" << missing << " cell(s) completed)";
    out << "\nconsistency per expert: " << expert_summary(report, panel.expert_ids())
        << "\nglobal consistency " << two_dec(report.global_cl) << "   consensus "
        << two_dec(report.consensus.relation_consensus) << "   blended "
        << two_dec(report.ccl) << " (threshold " << two_dec(weights.gamma)
        << (report.ccl >= weights.gamma ? ": met)" : ": not met)")
        << "\nreport written to " << *opt.out_path << "\n";
  }
  return 0;
}

struct OptimizeOptions {
  std::string in_path;
  std::optional<std::string> out_path;
  WeightFlags weights;
  SaFlags sa;
  int restarts = 1;
  bool trace = false;
  double suggest_threshold = 0.005;
};

int run_optimize(const OptimizeOptions& opt, std::ostream& out) {
  const PanelDocument doc = load_panel_file(opt.in_path);
  const ExpertPanel panel0 = assemble_panel(doc);
  const WeightConfig weights = resolve_weights(doc, opt.weights);
  const SaParams params = resolve_sa(doc, opt.sa);

  const AnalysisReport initial = analyze_panel(panel0, weights);
  const MultiStartResult multi =
      anneal_with_restarts(panel0, weights, params, opt.restarts);
  const OptimizationResult& best = multi.best;
  const AnalysisReport final_report = analyze_panel(best.best_panel, weights);
  const std::vector<SuggestedChange> suggestions =
      suggest_changes(panel0, best.best_panel, opt.suggest_threshold);

  ordered_json j;
  j["alternatives"] = panel0.alternatives();
  j["experts"] = panel0.expert_ids();
  j["weights"] = {{"delta", weights.delta}, {"gamma", weights.gamma}};
  {
    ordered_json init = metrics_json(initial);
    init.erase("collective_sm");
    j["initial"] = std::move(init);
  }
  j.update(metrics_json(final_report));
  j["termination"] = to_string(best.termination);
  j["trials_used"] = best.trials_used;
  j["best_cost"] = best.best_cost;
  j["seed"] = params.seed;

  ordered_json runs = ordered_json::array();
  for (const auto& outcome : multi.outcomes) {
    runs.push_back({{"seed", outcome.seed},
                    {"termination", to_string(outcome.termination)},
                    {"ccl", outcome.best_ccl},
                    {"trials", outcome.trials_used}});
  }
  j["restarts"] = std::move(runs);

  ordered_json changes = ordered_json::array();
  std::set<int> affected;
  for (const auto& s : suggestions) {
    affected.insert(s.expert);
    changes.push_back(
        {{"expert", s.expert},
         {"expert_id", panel0.expert_ids()[static_cast<std::size_t>(s.expert)]},
         {"cell", {s.row, s.col}},
         {"from", s.original},
         {"to", s.suggested}});
  }
  j["suggestions"] = std::move(changes);

  ordered_json unchanged = ordered_json::array();
  for (int h = 0; h < panel0.expert_count(); ++h) {
    if (!affected.count(h)) {
      unchanged.push_back(panel0.expert_ids()[static_cast<std::size_t>(h)]);
    }
  }
  j["unchanged_experts"] = std::move(unchanged);
  j["panel"] = panel_json(to_document(best.best_panel));
  if (opt.trace) {
    ordered_json trace = ordered_json::array();
    for (const auto& entry : best.trace) {
      trace.push_back({{"trial", entry.trial},
                       {"temperature", entry.temperature},
                       {"current_cost", entry.current_cost},
                       {"best_cost", entry.best_cost}});
    }
    j["trace"] = std::move(trace);
  }
  {
    ordered_json rendered = rendered_json(final_report);
    rendered["initial_ccl"] = two_dec(initial.ccl);
    j["rendered"] = std::move(rendered);
  }
  emit(j, opt.out_path, out);

  const bool reached = best.termination == Termination::kThresholdReached;
  if (opt.out_path) {
    out << "initial blended " << two_dec(initial.ccl) << " -> best "
        << two_dec(final_report.ccl) << " after " << best.trials_used
        << " trial(s) (" << to_string(best.termination) << ")\n"
        << suggestions.size() << " suggested change(s) across "
        << affected.size() << " expert(s)\nreport written to " << *opt.out_path
        << "\n";
  }
  return reached ? 0 : 3;
}

struct GenOptions {
  int alternatives = 4;
  int experts = 4;
  double missing = 0.3;
  double noise = 0.05;
  std::uint64_t seed = 1;
  std::optional<std::string> out_path;
};

int run_gen(const GenOptions& opt, std::ostream& out) {
  const PanelDocument doc = generate_panel(opt.alternatives, opt.experts,
                                           opt.missing, opt.noise, opt.seed);
  if (opt.out_path) {
    save_panel_file(doc, *opt.out_path);
    const int target = static_cast<int>(opt.missing * opt.alternatives *
                                        (opt.alternatives - 1));
    out << "generated " << opt.experts << " expert(s) x " << opt.alternatives
        << " alternatives, " << target << " of "
        << opt.alternatives * (opt.alternatives - 1)
        << " cells blanked per expert; panel written to " << *opt.out_path
        << "\n";
  } else {
    out << panel_to_json(doc);
  }
  return 0;
}

void add_weight_flags(CLI::App* cmd, WeightFlags& flags) {
  cmd->add_option("--delta", flags.delta,
                  "Weight of consensus in the blended score, in [0, 1] "
                  "(overrides the input document)");
  cmd->add_option("--gamma", flags.gamma,
                  "Acceptance threshold for the blended score, in [0, 1] "
                  "(overrides the input document)");
}

void add_sa_flags(CLI::App* cmd, SaFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Random seed (default 1)");
  cmd->add_option("--sa-initial-temp", flags.initial_temp,
                  "Starting temperature (default: calibrated from the panel)");
  cmd->add_option("--sa-fast-cool-factor", flags.fast_cool_factor,
                  "Cooling factor while acceptance is high (default 0.8)");
  cmd->add_option("--sa-slow-cool-factor", flags.slow_cool_factor,
                  "Cooling factor once acceptance has dropped (default 0.95)");
  cmd->add_option("--sa-fast-cool-ratio", flags.fast_cool_ratio,
                  "Acceptance ratio above which to cool fast (default 0.5)");
  cmd->add_option("--sa-freeze-ratio", flags.freeze_ratio,
                  "Acceptance ratio that counts as a frozen stage (default 0.02)");
  cmd->add_option("--sa-freeze-limit", flags.freeze_limit,
                  "Consecutive frozen stages before stopping (default 5)");
  cmd->add_option("--sa-stage-size-factor", flags.stage_size_factor,
                  "Trials per stage as a multiple of the panel's mutable cells "
                  "(default 16)");
  cmd->add_option("--sa-move-width", flags.move_width,
                  "Half-width of a random nudge (default 0.2)");
  cmd->add_option("--sa-value-grid", flags.value_grid,
                  "Snap moved values to this step, 0 to disable (default 0.01)");
  cmd->add_option("--sa-max-trials", flags.max_trials,
                  "Global trial cap (default 1000000)");
  cmd->add_flag("--sa-enforce-reciprocity", [&flags](std::int64_t) {
                  flags.enforce_reciprocity = true;
                },
                "Mirror every move onto the opposite cell as 1 - value");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Group decision support: completes partially filled fuzzy "
               "preference relations, scores their consistency and consensus, "
               "and searches for the smallest opinion shifts that lift a "
               "panel over its acceptance threshold."};
  app.name("concord");
  app.require_subcommand(1);

  CompleteOptions complete_opt;
  auto* complete_cmd = app.add_subcommand(
      "complete", "Fill the missing cells of every expert's relation");
  complete_cmd->add_option("--in", complete_opt.in_path, "Input panel JSON")
      ->required();
  complete_cmd->add_option("--out", complete_opt.out_path,
                           "Output panel JSON (stdout when omitted)");

  AnalyzeOptions analyze_opt;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Report consistency, consensus and the blended score");
  analyze_cmd->add_option("--in", analyze_opt.in_path, "Input panel JSON")
      ->required();
  analyze_cmd->add_option("--out", analyze_opt.out_path,
                          "Report JSON (stdout when omitted)");
  add_weight_flags(analyze_cmd, analyze_opt.weights);

  OptimizeOptions optimize_opt;
  auto* optimize_cmd = app.add_subcommand(
      "optimize",
      "Anneal the panel towards the acceptance threshold and emit suggested "
      "changes");
  optimize_cmd->add_option("--in", optimize_opt.in_path, "Input panel JSON")
      ->required();
  optimize_cmd->add_option("--out", optimize_opt.out_path,
                           "Report JSON (stdout when omitted)");
  add_weight_flags(optimize_cmd, optimize_opt.weights);
  add_sa_flags(optimize_cmd, optimize_opt.sa);
  optimize_cmd
      ->add_option("--restarts", optimize_opt.restarts,
                   "Independent runs with consecutive seeds; best result wins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize_cmd->add_flag("--trace", optimize_opt.trace,
                         "Include the search trace in the report");
  optimize_cmd
      ->add_option("--suggest-threshold", optimize_opt.suggest_threshold,
                   "Omit suggested moves smaller than this")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  GenOptions gen_opt;
  auto* gen_cmd = app.add_subcommand(
      "gen", "Generate a random panel with a completable missing-cell mask");
  gen_cmd
      ->add_option("--alternatives,--n,-n", gen_opt.alternatives,
                   "Number of alternatives (at least 3)")
      ->capture_default_str();
  gen_cmd
      ->add_option("--experts,--m,-m", gen_opt.experts,
                   "Number of experts (at least 2)")
      ->capture_default_str();
  gen_cmd
      ->add_option("--missing", gen_opt.missing,
                   "Fraction of off-diagonal cells to blank, in [0, 1)")
      ->capture_default_str();
  gen_cmd
      ->add_option("--noise", gen_opt.noise,
                   "Half-width of the perturbation applied to each cell")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_opt.seed, "Random seed")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_opt.out_path,
                      "Output panel JSON (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*complete_cmd) return run_complete(complete_opt, out);
    if (*analyze_cmd) return run_analyze(analyze_opt, out);
    if (*optimize_cmd) return run_optimize(optimize_opt, out);
    return run_gen(gen_opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return e.code() == ErrorCode::kUnestimable ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(const std::vector<std::string>& args) {
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace concord::cli
