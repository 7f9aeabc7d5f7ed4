#include "cfa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfa/error.hpp"

namespace cfa {

namespace {

// Baseline accuracies carry four decimals; closer than this is a tie.
constexpr double kBaselineTieTolerance = 5e-5;

struct TeamTotals {
  double sum = 0.0;
  std::size_t count = 0;
};

std::map<TeamId, TeamTotals> team1_totals(std::span<const double> values, const GameSet& games) {
  std::map<TeamId, TeamTotals> totals;
  for (const auto& team : games.teams()) {
    totals.emplace(team, TeamTotals{});
  }
  for (std::size_t i = 0; i < games.size(); ++i) {
    auto& t = totals[games[i].team1];
    t.sum += values[i];
    ++t.count;
  }
  return totals;
}

TeamRanking build_ranking(const std::map<TeamId, TeamTotals>& totals, Coverage coverage,
                          bool ascending, double missing_aggregate, RankingSource source) {
  TeamRanking ranking;
  ranking.source = source;
  for (const auto& [team, t] : totals) {
    if (t.count == 0) {
      if (coverage == Coverage::strict) {
        throw DataError("evaluation: team '" + team + "' never appears as team1");
      }
      ranking.entries.push_back(TeamRankEntry{team, missing_aggregate, 0});
    } else {
      ranking.entries.push_back(
          TeamRankEntry{team, t.sum / static_cast<double>(t.count), 0});
    }
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [ascending](const TeamRankEntry& a, const TeamRankEntry& b) {
              if (a.aggregate != b.aggregate) {
                return ascending ? a.aggregate < b.aggregate : a.aggregate > b.aggregate;
              }
              return a.team < b.team;
            });
  for (std::size_t k = 0; k < ranking.entries.size(); ++k) {
    ranking.entries[k].rank = k + 1;
  }
  return ranking;
}

void require_same_items(std::size_t values, const GameSet& games) {
  if (values != games.size()) {
    throw DataError("evaluation: system covers " + std::to_string(values) + " items but there are " +
                    std::to_string(games.size()) + " games");
  }
}

}  // namespace

std::string_view to_string(PredictionMode mode) {
  return mode == PredictionMode::mirror_pair ? "mirror_pair" : "threshold";
}

PredictionMode parse_prediction_mode(std::string_view text) {
  if (text == "mirror_pair") {
    return PredictionMode::mirror_pair;
  }
  if (text == "threshold") {
    return PredictionMode::threshold;
  }
  throw ConfigError("evaluation: unknown prediction mode '" + std::string(text) + "'");
}

PredictionMode default_prediction_mode(const GameSet& games) {
  return games.has_mirrors() ? PredictionMode::mirror_pair : PredictionMode::threshold;
}

RankedValues view_of(const ScoringSystem& system) {
  return RankedValues{system.oriented_scores(), Orientation::higher_better, system.ranks()};
}

RankedValues view_of(const CombinedSystem& system) {
  return RankedValues{system.values, system.orientation, system.ranks};
}

PredictionSet predict(const RankedValues& system, const GameSet& games, PredictionMode mode) {
  const std::size_t n = games.size();
  require_same_items(system.values.size(), games);
  PredictionSet out;
  out.mode = mode;
  out.predicted.assign(n, 0);
  if (mode == PredictionMode::mirror_pair) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto partner = games.mirror_index(i);
      if (!partner) {
        throw DataError("evaluation: mirror_pair prediction needs mirrored games; '" +
                        games[i].game_id + "' has no mirror");
      }
      out.predicted[i] = system.ranks[i] < system.ranks[*partner] ? 1 : 0;
    }
    return out;
  }
  const std::size_t cutoff = (n + 1) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    out.predicted[i] = system.orientation == Orientation::higher_better
                           ? (system.values[i] > 0.5 ? 1 : 0)
                           : (system.ranks[i] <= cutoff ? 1 : 0);
  }
  return out;
}

double accuracy(const PredictionSet& predictions, const GameSet& games) {
  if (predictions.predicted.size() != games.size()) {
    throw DataError("evaluation: " + std::to_string(predictions.predicted.size()) +
                    " predictions for " + std::to_string(games.size()) + " games");
  }
  std::size_t counted = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < games.size(); ++i) {
    if (is_mirror_copy(games[i])) {
      continue;
    }
    ++counted;
    if (predictions.predicted[i] == games[i].label) {
      ++correct;
    }
  }
  if (counted == 0) {
    throw DataError("evaluation: no original games to score");
  }
  return static_cast<double>(correct) / static_cast<double>(counted);
}

double game_accuracy(const RankedValues& system, const GameSet& games) {
  return accuracy(predict(system, games, default_prediction_mode(games)), games);
}

Coverage parse_coverage(std::string_view text) {
  if (text == "strict") {
    return Coverage::strict;
  }
  if (text == "lenient") {
    return Coverage::lenient;
  }
  throw ConfigError("evaluation: unknown coverage mode '" + std::string(text) + "'");
}

std::optional<std::size_t> TeamRanking::rank_of(const TeamId& team) const {
  for (const auto& e : entries) {
    if (e.team == team) {
      return e.rank;
    }
  }
  return std::nullopt;
}

TeamRanking game_to_team_ranking_rc(const CombinedSystem& combined, const GameSet& games,
                                    Coverage coverage) {
  if (combined.spec.space != Space::rank) {
    throw DataError("evaluation: '" + combined.spec.label() +
                    "' is not a rank combination; use the score-combination team ranking");
  }
  require_same_items(combined.ranks.size(), games);
  std::vector<double> game_ranks(combined.ranks.begin(), combined.ranks.end());
  const auto totals = team1_totals(game_ranks, games);
  return build_ranking(totals, coverage, /*ascending=*/true,
                       static_cast<double>(games.size() + 1), RankingSource::rank_combination);
}

TeamRanking game_to_team_ranking_sc(const CombinedSystem& combined, const GameSet& games,
                                    Coverage coverage) {
  if (combined.spec.space != Space::score) {
    throw DataError("evaluation: '" + combined.spec.label() +
                    "' is not a score combination; use the rank-combination team ranking");
  }
  require_same_items(combined.values.size(), games);
  const auto totals = team1_totals(combined.values, games);
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [team, t] : totals) {
    if (t.count > 0) {
      lowest = std::min(lowest, t.sum / static_cast<double>(t.count));
    }
  }
  const double missing = std::isfinite(lowest) ? lowest - 1.0 : 0.0;
  return build_ranking(totals, coverage, /*ascending=*/false, missing,
                       RankingSource::score_combination);
}

TeamRanking team_ranking_from_ranks(const std::map<TeamId, int>& ranks) {
  TeamRanking ranking;
  for (const auto& [team, rank] : ranks) {
    ranking.entries.push_back(
        TeamRankEntry{team, static_cast<double>(rank), static_cast<std::size_t>(rank)});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const TeamRankEntry& a, const TeamRankEntry& b) { return a.rank < b.rank; });
  return ranking;
}

double team_ranking_accuracy(const TeamRanking& ranking, const BracketResults& results) {
  if (results.empty()) {
    throw DataError("evaluation: no results to score against");
  }
  std::map<TeamId, std::size_t> rank;
  for (const auto& e : ranking.entries) {
    rank.emplace(e.team, e.rank);
  }
  auto lookup = [&rank](const TeamId& team) {
    const auto it = rank.find(team);
    if (it == rank.end()) {
      throw DataError("evaluation: team '" + team + "' is missing from the team ranking");
    }
    return it->second;
  };
  std::size_t correct = 0;
  for (const auto& g : results) {
    const std::size_t r1 = lookup(g.team1);
    const std::size_t r2 = lookup(g.team2);
    const TeamId& favourite = r1 < r2 ? g.team1 : g.team2;
    if (favourite == g.winner) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(results.size());
}

std::vector<std::pair<std::string, double>> baseline_accuracies(
    const std::vector<BaselineRanking>& baselines, const BracketResults* results) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& b : baselines) {
    if (b.accuracy) {
      out.emplace_back(b.system_name, *b.accuracy);
    } else if (!b.team_ranks.empty() && results != nullptr) {
      out.emplace_back(b.system_name,
                       team_ranking_accuracy(team_ranking_from_ranks(b.team_ranks), *results));
    } else {
      throw DataError("evaluation: baseline '" + b.system_name +
                      "' has neither an accuracy nor rankings that can be scored");
    }
  }
  return out;
}

EvaluationReport compare_baselines(EvaluationReport report,
                                   const std::vector<std::pair<std::string, double>>& baselines) {
  if (baselines.empty()) {
    throw DataError("evaluation: no baselines to compare against");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, acc] : baselines) {
    best = std::max(best, acc);
  }
  for (auto& entry : report.entries) {
    entry.delta_vs_best_baseline = entry.accuracy - best;
    std::size_t beaten = 0;
    for (const auto& [name, acc] : baselines) {
      if (entry.accuracy > acc + kBaselineTieTolerance) {
        ++beaten;
      }
    }
    entry.baselines_beaten = beaten;
  }
  report.baselines = baselines;
  return report;
}

}  // namespace cfa
