#include "cfa/reports.hpp"

#include <algorithm>
#include <map>

#include "cfa/error.hpp"

namespace cfa::reports {

using csv::format_double;

csv::Writer rsc_csv(std::span<const ScoringSystem> systems) {
  csv::Writer out({"system", "rank", "score"});
  for (const auto& s : systems) {
    const auto& f = s.rsc();
    for (std::size_t k = 0; k < f.size(); ++k) {
      out.add_row({s.name(), std::to_string(k + 1), format_double(f[k])});
    }
  }
  return out;
}

std::vector<RscSeries> read_rsc(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto sys_col = table.require_column("system");
  const auto rank_col = table.require_column("rank");
  const auto score_col = table.require_column("score");
  std::vector<RscSeries> out;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const RscSeries& s) { return s.system == cells[sys_col]; });
    if (it == out.end()) {
      out.push_back(RscSeries{cells[sys_col], {}});
      it = std::prev(out.end());
    }
    const long long rank = csv::parse_integer(cells[rank_col], table, row);
    if (rank != static_cast<long long>(it->scores.size()) + 1) {
      throw DataError("reports: " + path.string() + " line " +
                      std::to_string(table.line_numbers[row]) + ": ranks of system '" +
                      it->system + "' must run 1, 2, ... in order");
    }
    it->scores.push_back(csv::parse_double(cells[score_col], table, row));
  }
  if (out.empty()) {
    throw DataError("reports: " + path.string() + " holds no RSC rows");
  }
  return out;
}

csv::Writer diversity_csv(const DiversityMatrix& matrix) {
  csv::Writer out({"system_i", "system_j", "cd"});
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      out.add_row({matrix.system_names[i], matrix.system_names[j], format_double(matrix.cd[i][j])});
    }
  }
  return out;
}

csv::Writer strength_csv(const DiversityMatrix& matrix) {
  csv::Writer out({"system", "ds"});
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out.add_row({matrix.system_names[i], format_double(matrix.ds[i])});
  }
  return out;
}

csv::Writer fusion_report_csv(std::span<const FusionRow> rows) {
  csv::Writer out({"label", "space", "weighting", "members", "accuracy"});
  for (const auto& r : rows) {
    out.add_row({r.spec.label(), std::string(to_string(r.spec.space)),
                 std::string(to_string(r.spec.weighting)), r.spec.members_label(),
                 format_double(r.accuracy)});
  }
  return out;
}

std::vector<FusionRow> read_fusion_report(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto label_col = table.require_column("label");
  const auto acc_col = table.require_column("accuracy");
  std::vector<FusionRow> out;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    out.push_back(FusionRow{parse_ensemble_label(table.rows[row][label_col]),
                            csv::parse_double(table.rows[row][acc_col], table, row)});
  }
  return out;
}

csv::Writer combined_values_csv(std::span<const CombinedSystem> combined, const GameSet& games) {
  csv::Writer out({"label", "game_id", "value", "rank"});
  for (const auto& c : combined) {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      out.add_row({c.spec.label(), games[i].game_id, format_double(c.values[i]),
                   std::to_string(c.ranks[i])});
    }
  }
  return out;
}

csv::Writer base_accuracy_csv(std::span<const std::pair<std::string, double>> rows) {
  csv::Writer out({"system", "accuracy"});
  for (const auto& [name, acc] : rows) {
    out.add_row({name, format_double(acc)});
  }
  return out;
}

std::vector<std::pair<std::string, double>> read_base_accuracy(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto sys_col = table.require_column("system");
  const auto acc_col = table.require_column("accuracy");
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    out.emplace_back(table.rows[row][sys_col],
                     csv::parse_double(table.rows[row][acc_col], table, row));
  }
  return out;
}

csv::Writer evaluation_report_csv(const EvaluationReport& report) {
  csv::Writer out({"label", "accuracy", "delta_vs_best_baseline"});
  for (const auto& e : report.entries) {
    out.add_row({e.label, format_double(e.accuracy),
                 e.delta_vs_best_baseline ? format_double(*e.delta_vs_best_baseline) : ""});
  }
  return out;
}

csv::Writer team_ranking_csv(const TeamRanking& ranking) {
  csv::Writer out({"rank", "team_id", "aggregate"});
  for (const auto& e : ranking.entries) {
    out.add_row({std::to_string(e.rank), e.team, format_double(e.aggregate)});
  }
  return out;
}

TeamRanking read_team_ranking(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto rank_col = table.require_column("rank");
  const auto team_col = table.require_column("team_id");
  const auto agg_col = table.column("aggregate");
  TeamRanking ranking;
  std::vector<bool> seen(table.rows.size() + 1, false);
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    const long long rank = csv::parse_integer(cells[rank_col], table, row);
    if (rank < 1 || rank > static_cast<long long>(table.rows.size()) || seen[rank]) {
      throw DataError("reports: " + path.string() + ": ranks are not a permutation of 1.." +
                      std::to_string(table.rows.size()));
    }
    seen[rank] = true;
    const double aggregate =
        agg_col ? csv::parse_double(cells[*agg_col], table, row) : static_cast<double>(rank);
    ranking.entries.push_back(
        TeamRankEntry{cells[team_col], aggregate, static_cast<std::size_t>(rank)});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const TeamRankEntry& a, const TeamRankEntry& b) { return a.rank < b.rank; });
  return ranking;
}

csv::Writer selection_csv(const ImprovementTable& table, const std::string& selected) {
  csv::Writer out({"members", "count", "selected"});
  for (const auto& e : table.entries) {
    out.add_row({e.members, std::to_string(e.count), e.members == selected ? "1" : "0"});
  }
  return out;
}

}  // namespace cfa::reports
