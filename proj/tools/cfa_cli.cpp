// Command-line driver for the combinatorial fusion pipeline.
//
//   cfa ingest     validate games, add team-stat differences, mirror
//   cfa fuse       fuse every subset of scoring systems on one season
//   cfa evaluate   accuracy of every combination, optionally vs. baselines
//   cfa select     count cross-season improvements and pick a subset
//   cfa team-rank  turn one combination's game ranking into a team ranking
//   cfa compare    score a team ranking on bracket results vs. baselines
//   cfa plot       RSC or combination-performance SVG
//   cfa run        the whole pipeline from a config file
//
// Exit codes: 0 ok, 1 config error, 2 data error, 3 numeric error.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "cfa/csv.hpp"
#include "cfa/dataset.hpp"
#include "cfa/diversity.hpp"
#include "cfa/error.hpp"
#include "cfa/evaluation.hpp"
#include "cfa/fusion.hpp"
#include "cfa/kernels.hpp"
#include "cfa/pipeline.hpp"
#include "cfa/reports.hpp"
#include "cfa/selection.hpp"
#include "cfa/svg_plot.hpp"

namespace fs = std::filesystem;

namespace {

std::string signed_percent(double fraction) {
  return (fraction >= 0.0 ? "+" : "") + cfa::csv::format_fixed(100.0 * fraction, 4) + "%";
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

/// Options shared by every subcommand that builds and fuses systems.
struct FusionOptions {
  std::string games;
  std::string systems;
  std::string normalization = "none";
  std::string spaces = "SC,RC";
  std::string weightings = "AC,WCDS,WCP";
  std::size_t h_min = 2;
  std::string ds_scope = "ensemble";
  std::string rc_weight_mode = "reciprocal";
  double ds_epsilon = 1e-12;
  std::string performance;
  std::string prediction_mode = "auto";

  void attach(CLI::App* app, bool with_space_lists = true) {
    app->add_option("--games", games, "Wide CSV games file with sys_<NAME> columns")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--systems", systems, "Comma-separated system names (default: all columns)");
    app->add_option("--normalize", normalization, "none | minmax")
        ->check(CLI::IsMember({"none", "minmax"}));
    if (with_space_lists) {
      app->add_option("--spaces", spaces, "Comma-separated spaces: SC,RC");
      app->add_option("--weightings", weightings, "Comma-separated weightings: AC,WCDS,WCP");
      app->add_option("--h-min", h_min, "Smallest subset size");
    }
    app->add_option("--ds-scope", ds_scope, "ensemble | pool")
        ->check(CLI::IsMember({"ensemble", "pool"}));
    app->add_option("--rc-weight-mode", rc_weight_mode, "reciprocal | direct")
        ->check(CLI::IsMember({"reciprocal", "direct"}));
    app->add_option("--ds-epsilon", ds_epsilon, "Replacement for a zero diversity strength");
    app->add_option("--performance", performance, "WCP weights, e.g. A=0.71,B=0.69");
    app->add_option("--prediction-mode", prediction_mode, "auto | mirror_pair | threshold")
        ->check(CLI::IsMember({"auto", "mirror_pair", "threshold"}));
  }

  std::optional<cfa::PredictionMode> mode() const {
    if (prediction_mode == "auto") {
      return std::nullopt;
    }
    return cfa::parse_prediction_mode(prediction_mode);
  }

  std::vector<cfa::ScoringSystem> build_systems(const cfa::GameSet& g) const {
    const auto method =
        normalization == "minmax" ? cfa::Normalization::minmax : cfa::Normalization::none;
    auto out = cfa::normalize_all(cfa::column_scoring_systems(g, split_commas(systems)), method);
    if (out.size() < 2) {
      throw cfa::ConfigError("cli: at least two systems are required, found " +
                             std::to_string(out.size()));
    }
    return out;
  }

  cfa::FusionConfig fusion_config(const std::vector<cfa::ScoringSystem>& built) const {
    cfa::FusionConfig config;
    config.spaces.clear();
    for (const auto& s : split_commas(spaces)) config.spaces.push_back(cfa::parse_space(s));
    config.weightings.clear();
    for (const auto& w : split_commas(weightings)) {
      config.weightings.push_back(cfa::parse_weighting(w));
    }
    config.h_min = h_min;
    config.ds_scope = cfa::parse_diversity_scope(ds_scope);
    config.rc_weight_mode = cfa::parse_rank_weight_mode(rc_weight_mode);
    config.ds_epsilon = ds_epsilon;
    config.performance = performance_vector(built);
    return config;
  }

  std::vector<double> performance_vector(const std::vector<cfa::ScoringSystem>& built) const {
    std::vector<double> out;
    if (performance.empty()) {
      return out;
    }
    std::map<std::string, double> given;
    for (const auto& item : split_commas(performance)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw cfa::ConfigError("cli: performance entry '" + item + "' must look like NAME=value");
      }
      try {
        given[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw cfa::ConfigError("cli: performance entry '" + item + "' has no numeric value");
      }
    }
    for (const auto& s : built) {
      const auto it = given.find(s.name());
      if (it == given.end()) {
        throw cfa::ConfigError("cli: no performance value for system '" + s.name() + "'");
      }
      out.push_back(it->second);
    }
    return out;
  }
};

cfa::GameSet load(const std::string& path) { return cfa::load_games(path); }

int run_ingest(const std::string& games_path, const std::string& stats_path, bool do_mirror,
               const std::string& out) {
  auto games = load(games_path);
  if (!stats_path.empty()) {
    games = cfa::difference_features(cfa::load_team_stats(stats_path), games);
  }
  if (do_mirror) {
    games = cfa::mirror(games);
  }
  cfa::save_games(games, out);
  std::cout << "ingested " << games.size() << " games -> " << out << '\n';
  return 0;
}

int run_fuse(const FusionOptions& opts, const std::string& out_dir, bool with_values) {
  const auto games = load(opts.games);
  const auto systems = opts.build_systems(games);
  const auto config = opts.fusion_config(systems);
  const auto diversity = cfa::diversity_strength(systems);
  const auto combined = cfa::fuse_all(systems, config, diversity);
  const auto accuracies = cfa::combined_accuracies(combined, games, opts.mode());
  std::vector<cfa::reports::FusionRow> rows;
  for (const auto& [spec, acc] : accuracies) {
    rows.push_back({spec, acc});
  }
  const fs::path dir(out_dir);
  cfa::reports::fusion_report_csv(rows).save(dir / "fusion_report.csv");
  cfa::reports::base_accuracy_csv(cfa::base_accuracies(systems, games, opts.mode()))
      .save(dir / "base_accuracy.csv");
  cfa::reports::rsc_csv(systems).save(dir / "rsc.csv");
  cfa::reports::diversity_csv(diversity).save(dir / "diversity.csv");
  cfa::reports::strength_csv(diversity).save(dir / "ds.csv");
  if (with_values) {
    cfa::reports::combined_values_csv(combined, games).save(dir / "values.csv");
  }
  std::cout << combined.size() << " combined systems over " << games.size() << " games -> "
            << dir.string() << '\n';
  return 0;
}

int run_evaluate(const FusionOptions& opts, const std::string& baselines_path,
                 const std::string& out) {
  const auto games = load(opts.games);
  const auto systems = opts.build_systems(games);
  const auto combined = cfa::fuse_all(systems, opts.fusion_config(systems));
  cfa::EvaluationReport report;
  for (const auto& [spec, acc] : cfa::combined_accuracies(combined, games, opts.mode())) {
    report.entries.push_back({spec.label(), acc, {}, {}});
  }
  if (!baselines_path.empty()) {
    report = cfa::compare_baselines(report,
                                    cfa::baseline_accuracies(cfa::load_baselines(baselines_path)));
  }
  cfa::reports::evaluation_report_csv(report).save(out);
  std::cout << report.entries.size() << " combinations evaluated -> " << out << '\n';
  return 0;
}

int run_select(const std::vector<std::string>& season_dirs, const std::string& count_spaces,
               const std::string& count_weightings, const std::string& out) {
  std::vector<cfa::YearResult> years;
  for (std::size_t k = 0; k < season_dirs.size(); ++k) {
    const fs::path dir(season_dirs[k]);
    cfa::YearResult year;
    const std::string stem = dir.filename().empty() ? dir.parent_path().filename().string()
                                                    : dir.filename().string();
    year.season = std::all_of(stem.begin(), stem.end(), ::isdigit) && !stem.empty()
                      ? std::stoi(stem)
                      : static_cast<int>(k + 1);
    year.base = cfa::reports::read_base_accuracy(dir / "base_accuracy.csv");
    for (const auto& row : cfa::reports::read_fusion_report(dir / "fusion_report.csv")) {
      year.combined.emplace_back(row.spec, row.accuracy);
    }
    years.push_back(std::move(year));
  }
  cfa::SelectionConfig config;
  for (const auto& s : split_commas(count_spaces)) config.spaces.push_back(cfa::parse_space(s));
  for (const auto& w : split_commas(count_weightings)) {
    config.weightings.push_back(cfa::parse_weighting(w));
  }
  const auto table = cfa::improvement_table(years, config);
  const auto selected = cfa::select_model(table);
  cfa::reports::selection_csv(table, selected).save(out);
  std::cout << selected << '\n';
  return 0;
}

int run_team_rank(const FusionOptions& opts, const std::string& members,
                  const std::string& space_text, const std::string& weighting_text,
                  const std::string& coverage_text, const std::string& out) {
  const auto games = load(opts.games);
  const auto systems = opts.build_systems(games);
  cfa::Subset subset;
  for (const auto& name : cfa::parse_members_label(members)) {
    const auto it = std::find_if(systems.begin(), systems.end(),
                                 [&](const cfa::ScoringSystem& s) { return s.name() == name; });
    if (it == systems.end()) {
      throw cfa::DataError("cli: member '" + name + "' is not among the loaded systems");
    }
    subset.push_back(static_cast<std::size_t>(it - systems.begin()));
  }
  std::sort(subset.begin(), subset.end());
  const auto space = cfa::parse_space(space_text);
  const auto weighting = cfa::parse_weighting(weighting_text);
  const auto config = opts.fusion_config(systems);

  std::vector<double> weights;
  if (weighting == cfa::Weighting::WCDS) {
    const auto diversity = cfa::diversity_strength(systems);
    const auto strength = config.ds_scope == cfa::DiversityScope::ensemble
                              ? diversity.strength_within(subset)
                              : std::vector<double>{};
    weights.assign(systems.size(), 0.0);
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const double ds = config.ds_scope == cfa::DiversityScope::ensemble ? strength[k]
                                                                          : diversity.ds[subset[k]];
      weights[subset[k]] = ds == 0.0 ? config.ds_epsilon : ds;
    }
  } else if (weighting == cfa::Weighting::WCP) {
    weights = config.performance;
  }
  const auto coverage = cfa::parse_coverage(coverage_text);
  const auto ranking =
      space == cfa::Space::rank
          ? cfa::game_to_team_ranking_rc(
                cfa::combine_ranks(systems, subset, weighting, weights, config.rc_weight_mode),
                games, coverage)
          : cfa::game_to_team_ranking_sc(cfa::combine_scores(systems, subset, weighting, weights),
                                         games, coverage);
  cfa::reports::team_ranking_csv(ranking).save(out);
  std::cout << ranking.entries.size() << " teams ranked -> " << out << '\n';
  return 0;
}

int run_compare(const std::string& ranking_path, const std::string& label,
                const std::string& results_path, const std::string& baselines_path,
                const std::string& out) {
  const auto ranking = cfa::reports::read_team_ranking(ranking_path);
  const auto results = cfa::load_results(results_path);
  cfa::EvaluationReport report;
  report.entries.push_back({label, cfa::team_ranking_accuracy(ranking, results), {}, {}});
  if (!baselines_path.empty()) {
    report = cfa::compare_baselines(
        report, cfa::baseline_accuracies(cfa::load_baselines(baselines_path), &results));
  }
  cfa::reports::evaluation_report_csv(report).save(out);
  const auto& e = report.entries.front();
  std::cout << e.label << " accuracy " << cfa::csv::format_fixed(100.0 * e.accuracy, 4) << "%";
  if (e.delta_vs_best_baseline) {
    std::cout << ", delta vs best baseline "
              << signed_percent(*e.delta_vs_best_baseline) << ", beats "
              << *e.baselines_beaten << " of " << report.baselines.size();
  }
  std::cout << '\n';
  return 0;
}

int run_plot(const std::string& kind, const std::string& input, const std::string& out,
             std::optional<double> best, const std::string& base_accuracy) {
  std::string svg;
  if (kind == "rsc") {
    svg = cfa::plot::rsc_svg(cfa::reports::read_rsc(input));
  } else {
    if (!best && !base_accuracy.empty()) {
      double top = 0.0;
      for (const auto& [name, acc] : cfa::reports::read_base_accuracy(base_accuracy)) {
        top = std::max(top, acc);
      }
      best = top;
    }
    svg = cfa::plot::performance_svg(cfa::reports::read_fusion_report(input), best);
  }
  cfa::plot::save(svg, out);
  std::cout << "wrote " << out << '\n';
  return 0;
}

int run_pipeline(const std::string& config_path, const std::vector<std::string>& overrides) {
  const auto config = cfa::load_config(config_path, overrides);
  const auto summary = cfa::run(config);
  std::cout << "selected " << summary.selected_members << " ("
            << summary.table.count(summary.selected_members) << " of " << summary.table.seasons
            << " seasons improved)\n";
  for (const auto& e : summary.report.entries) {
    std::cout << e.label << " team-ranking accuracy "
              << cfa::csv::format_fixed(100.0 * e.accuracy, 4) << "%";
    if (e.delta_vs_best_baseline) {
      std::cout << " (" << signed_percent(*e.delta_vs_best_baseline) << " vs best baseline)";
    }
    std::cout << '\n';
  }
  std::cout << summary.written.size() << " files written under " << config.output_dir.string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial fusion of scoring systems for bracket prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cfa 0.1.0");
  bool show_kernels = false;
  app.add_flag("--kernels", show_kernels, "Print the active arithmetic kernel table");

  std::string games_path, stats_path, out_path;
  bool do_mirror = false;
  auto* ingest = app.add_subcommand("ingest", "Validate games, add feature differences, mirror");
  ingest->add_option("--games", games_path)->required()->check(CLI::ExistingFile);
  ingest->add_option("--team-stats", stats_path)->check(CLI::ExistingFile);
  ingest->add_flag("--mirror", do_mirror, "Append a mirrored copy of every game");
  ingest->add_option("--out", out_path)->required();

  FusionOptions fuse_opts;
  std::string fuse_out = "fusion";
  bool with_values = false;
  auto* fuse = app.add_subcommand("fuse", "Fuse every subset of systems on one game set");
  fuse_opts.attach(fuse);
  fuse->add_option("--out", fuse_out, "Output directory");
  fuse->add_flag("--values", with_values, "Also write per-game combined values");

  FusionOptions eval_opts;
  std::string eval_baselines, eval_out = "report.csv";
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of every combination");
  eval_opts.attach(evaluate);
  evaluate->add_option("--baselines", eval_baselines)->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_out);

  std::vector<std::string> season_dirs;
  std::string count_spaces, count_weightings, select_out = "selection.csv";
  auto* select = app.add_subcommand("select", "Pick the subset that improves most often");
  select->add_option("--season", season_dirs, "Directory written by `fuse` (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  select->add_option("--count-spaces", count_spaces, "Variants that may count (default all)");
  select->add_option("--count-weightings", count_weightings);
  select->add_option("--out", select_out);

  FusionOptions rank_opts;
  std::string members, space = "RC", weighting = "WCDS", coverage = "strict",
                       rank_out = "team_ranking.csv";
  auto* team_rank = app.add_subcommand("team-rank", "Team ranking from one combination");
  rank_opts.attach(team_rank, /*with_space_lists=*/false);
  team_rank->add_option("--members", members, "Subset label, e.g. ABE")->required();
  team_rank->add_option("--space", space)->check(CLI::IsMember({"SC", "RC"}));
  team_rank->add_option("--weighting", weighting)->check(CLI::IsMember({"AC", "WCDS", "WCP"}));
  team_rank->add_option("--coverage", coverage)->check(CLI::IsMember({"strict", "lenient"}));
  team_rank->add_option("--out", rank_out);

  std::string ranking_path, label = "ensemble", results_path, baselines_path,
                            compare_out = "report.csv";
  auto* compare = app.add_subcommand("compare", "Bracket accuracy of a team ranking");
  compare->add_option("--ranking", ranking_path)->required()->check(CLI::ExistingFile);
  compare->add_option("--label", label);
  compare->add_option("--results", results_path)->required()->check(CLI::ExistingFile);
  compare->add_option("--baselines", baselines_path)->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out);

  std::string plot_kind, plot_input, plot_out, base_accuracy;
  std::optional<double> best;
  auto* plot = app.add_subcommand("plot", "Render an RSC or performance SVG");
  plot->add_option("--kind", plot_kind)->required()->check(CLI::IsMember({"rsc", "performance"}));
  plot->add_option("--input", plot_input)->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out)->required();
  plot->add_option("--best", best, "Best individual accuracy marker");
  plot->add_option("--base-accuracy", base_accuracy, "base_accuracy.csv to take the marker from")
      ->check(CLI::ExistingFile);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  run->add_option("--config", config_path)->required();
  run->add_option("--set", overrides, "Override a config value: section.key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (show_kernels) {
    std::cerr << "kernels: " << cfa::kernels::active_table().name << '\n';
  }

  try {
    if (*ingest) return run_ingest(games_path, stats_path, do_mirror, out_path);
    if (*fuse) return run_fuse(fuse_opts, fuse_out, with_values);
    if (*evaluate) return run_evaluate(eval_opts, eval_baselines, eval_out);
    if (*select) return run_select(season_dirs, count_spaces, count_weightings, select_out);
    if (*team_rank) return run_team_rank(rank_opts, members, space, weighting, coverage, rank_out);
    if (*compare) return run_compare(ranking_path, label, results_path, baselines_path, compare_out);
    if (*plot) return run_plot(plot_kind, plot_input, plot_out, best, base_accuracy);
    if (*run) return run_pipeline(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cfa::exit_code_for(e);
  }
  return 1;
}
