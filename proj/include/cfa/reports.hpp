#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfa/csv.hpp"
#include "cfa/dataset.hpp"
#include "cfa/diversity.hpp"
#include "cfa/evaluation.hpp"
#include "cfa/fusion.hpp"
#include "cfa/scoring.hpp"
#include "cfa/selection.hpp"

/// Writers and readers for the CSV files exchanged between subcommands.
namespace cfa::reports {

// system,rank,score
csv::Writer rsc_csv(std::span<const ScoringSystem> systems);

struct RscSeries {
  std::string system;
  std::vector<double> scores;  // index k holds the score at rank k + 1
};
std::vector<RscSeries> read_rsc(const std::filesystem::path& path);

// system_i,system_j,cd (each unordered pair once)
csv::Writer diversity_csv(const DiversityMatrix& matrix);
// system,ds
csv::Writer strength_csv(const DiversityMatrix& matrix);

struct FusionRow {
  EnsembleSpec spec;
  double accuracy = 0.0;
};

// label,space,weighting,members,accuracy
csv::Writer fusion_report_csv(std::span<const FusionRow> rows);
std::vector<FusionRow> read_fusion_report(const std::filesystem::path& path);

// label,game_id,value,rank
csv::Writer combined_values_csv(std::span<const CombinedSystem> combined, const GameSet& games);

// system,accuracy
csv::Writer base_accuracy_csv(std::span<const std::pair<std::string, double>> rows);
std::vector<std::pair<std::string, double>> read_base_accuracy(const std::filesystem::path& path);

// label,accuracy,delta_vs_best_baseline
csv::Writer evaluation_report_csv(const EvaluationReport& report);

// rank,team_id,aggregate
csv::Writer team_ranking_csv(const TeamRanking& ranking);
TeamRanking read_team_ranking(const std::filesystem::path& path);

// members,count,selected
csv::Writer selection_csv(const ImprovementTable& table, const std::string& selected);

}  // namespace cfa::reports
