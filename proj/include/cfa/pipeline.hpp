#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfa/builtin_scorers.hpp"
#include "cfa/dataset.hpp"
#include "cfa/diversity.hpp"
#include "cfa/evaluation.hpp"
#include "cfa/fusion.hpp"
#include "cfa/scoring.hpp"
#include "cfa/selection.hpp"

namespace cfa {

enum class BuiltinKind { logistic, centroid };

struct BuiltinSystem {
  std::string name;
  BuiltinKind kind = BuiltinKind::logistic;
};

/// Everything `run` needs. Relative paths are resolved against the directory
/// of the config file by load_config.
struct PipelineConfig {
  std::map<int, std::filesystem::path> season_games;
  std::map<int, std::filesystem::path> season_team_stats;
  std::optional<std::filesystem::path> baselines;
  std::optional<std::filesystem::path> results;
  std::filesystem::path output_dir = "out";

  std::vector<std::string> column_systems;  // sys_<NAME> columns
  std::vector<BuiltinSystem> builtin_systems;
  Normalization normalization = Normalization::none;
  LogisticConfig logistic;
  double centroid_scale = 1.0;

  FusionConfig fusion;  // performance is filled per season from the source below
  std::map<std::string, double> explicit_performance;
  std::optional<int> validation_season;

  bool mirror = false;
  std::optional<PredictionMode> prediction_mode;  // nullopt: per-set default
  Coverage coverage = Coverage::strict;

  std::vector<int> selection_seasons;  // empty: every season except the target
  std::optional<int> target_season;
  SelectionConfig counting;
  Weighting deploy_weighting = Weighting::WCDS;

  std::vector<std::string> system_names() const;
  void validate() const;
};

/// Parses an INI-style config (sections with key = value lines). Each
/// override is "section.key=value" and replaces the file's value.
PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides = {});

/// Loads one season's games and applies team-stat differences and mirroring
/// as configured.
GameSet prepare_games(const PipelineConfig& config, int season);

/// One ScoringSystem per named sys_ column (all columns when `names` is empty).
std::vector<ScoringSystem> column_scoring_systems(const GameSet& games,
                                                  const std::vector<std::string>& names);

std::vector<ScoringSystem> normalize_all(const std::vector<ScoringSystem>& systems,
                                         Normalization method);

std::vector<std::pair<std::string, double>> base_accuracies(
    const std::vector<ScoringSystem>& systems, const GameSet& games,
    std::optional<PredictionMode> mode = std::nullopt);

std::vector<std::pair<EnsembleSpec, double>> combined_accuracies(
    const std::vector<CombinedSystem>& combined, const GameSet& games,
    std::optional<PredictionMode> mode = std::nullopt);

/// Concatenates seasons into one multi-season set for training; game ids
/// gain a "<season>:" prefix so they stay unique.
GameSet concat_seasons(const std::vector<GameSet>& seasons);

struct RunSummary {
  std::string selected_members;
  ImprovementTable table;
  EvaluationReport report;
  std::vector<std::filesystem::path> written;
};

/// Full pipeline: per-season fusion and evaluation, cross-season selection,
/// team rankings for the target season and the baseline comparison.
RunSummary run(const PipelineConfig& config);

}  // namespace cfa
