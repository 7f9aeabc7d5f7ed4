#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfa/dataset.hpp"
#include "cfa/fusion.hpp"
#include "cfa/scoring.hpp"

namespace cfa {

enum class PredictionMode { mirror_pair, threshold };

std::string_view to_string(PredictionMode mode);
PredictionMode parse_prediction_mode(std::string_view text);

/// mirror_pair when the games carry mirror links, threshold otherwise.
PredictionMode default_prediction_mode(const GameSet& games);

/// Values, orientation and derived ranks of any system over a GameSet's
/// items; both base and combined systems are evaluated through this view.
struct RankedValues {
  std::span<const double> values;
  Orientation orientation;
  std::span<const std::size_t> ranks;
};

RankedValues view_of(const ScoringSystem& system);
RankedValues view_of(const CombinedSystem& system);

struct PredictionSet {
  std::vector<int> predicted;  // one {0,1} entry per game
  PredictionMode mode = PredictionMode::threshold;
};

/// mirror_pair: within each mirror pair the record with the better derived
/// rank is predicted 1 and its partner 0. threshold: higher_better predicts 1
/// iff value > 0.5; lower_better predicts 1 iff rank <= ceil(n / 2).
PredictionSet predict(const RankedValues& system, const GameSet& games, PredictionMode mode);

/// Fraction of correct predictions. On mirrored sets only the original
/// records count.
double accuracy(const PredictionSet& predictions, const GameSet& games);

/// predict + accuracy with the default mode for the games.
double game_accuracy(const RankedValues& system, const GameSet& games);

enum class Coverage { strict, lenient };

Coverage parse_coverage(std::string_view text);

enum class RankingSource { rank_combination, score_combination };

struct TeamRankEntry {
  TeamId team;
  double aggregate = 0.0;
  std::size_t rank = 0;
};

struct TeamRanking {
  std::vector<TeamRankEntry> entries;  // in rank order
  RankingSource source = RankingSource::rank_combination;

  std::optional<std::size_t> rank_of(const TeamId& team) const;
};

/// Mean derived game rank over the games a team plays as team1, sorted
/// ascending (ties by team id). Lenient coverage gives teams without a team1
/// game the aggregate n + 1.
TeamRanking game_to_team_ranking_rc(const CombinedSystem& combined, const GameSet& games,
                                    Coverage coverage = Coverage::strict);

/// Mean combined score over the games a team plays as team1, sorted
/// descending (ties by team id). Lenient coverage gives teams without a team1
/// game an aggregate one below the lowest observed.
TeamRanking game_to_team_ranking_sc(const CombinedSystem& combined, const GameSet& games,
                                    Coverage coverage = Coverage::strict);

TeamRanking team_ranking_from_ranks(const std::map<TeamId, int>& ranks);

/// Fraction of result games won by the better-ranked (smaller rank) team.
double team_ranking_accuracy(const TeamRanking& ranking, const BracketResults& results);

struct ReportEntry {
  std::string label;
  double accuracy = 0.0;
  std::optional<double> delta_vs_best_baseline;
  std::optional<std::size_t> baselines_beaten;
};

struct EvaluationReport {
  std::vector<ReportEntry> entries;
  std::vector<std::pair<std::string, double>> baselines;
};

/// Baselines with a stated accuracy keep it; ranking-only baselines are
/// scored against `results`.
std::vector<std::pair<std::string, double>> baseline_accuracies(
    const std::vector<BaselineRanking>& baselines, const BracketResults* results = nullptr);

/// Fills each entry's delta against the best baseline and the count of
/// baselines it beats strictly.
EvaluationReport compare_baselines(EvaluationReport report,
                                   const std::vector<std::pair<std::string, double>>& baselines);

}  // namespace cfa
