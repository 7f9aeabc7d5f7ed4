#include "cfa/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "cfa/csv.hpp"
#include "cfa/error.hpp"

namespace cfa {

namespace {

constexpr std::string_view kFeaturePrefix = "f_";
constexpr std::string_view kSystemPrefix = "sys_";

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<double> negated(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return -x; });
  return out;
}

}  // namespace

bool is_mirror_copy(const GameRecord& record) {
  return record.mirror_of.has_value() && ends_with(record.game_id, kMirrorSuffix);
}

GameSet::GameSet(std::vector<GameRecord> records, bool multi_season)
    : records_(std::move(records)), multi_season_(multi_season) {
  validate();
}

void GameSet::validate() const {
  std::unordered_map<std::string, std::size_t> index;
  const std::size_t dim = records_.empty() ? 0 : records_.front().features.size();
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.game_id.empty()) {
      throw DataError("dataset: record " + std::to_string(i + 1) + " has an empty game_id");
    }
    if (!index.emplace(r.game_id, i).second) {
      throw DataError("dataset: duplicate game_id '" + r.game_id + "'");
    }
    if (r.team1 == r.team2) {
      throw DataError("dataset: game '" + r.game_id + "' has team1 == team2 ('" + r.team1 + "')");
    }
    if (r.label != 0 && r.label != 1) {
      throw DataError("dataset: game '" + r.game_id + "' has label " + std::to_string(r.label) +
                      " outside {0,1}");
    }
    if (r.features.size() != dim) {
      throw DataError("dataset: game '" + r.game_id + "' has " + std::to_string(r.features.size()) +
                      " features, expected " + std::to_string(dim));
    }
    if (!multi_season_ && r.season != records_.front().season) {
      throw DataError("dataset: game '" + r.game_id + "' is from season " +
                      std::to_string(r.season) + " but the set holds season " +
                      std::to_string(records_.front().season));
    }
  }
  for (const auto& r : records_) {
    if (!r.mirror_of) {
      continue;
    }
    const auto it = index.find(*r.mirror_of);
    if (it == index.end()) {
      throw DataError("dataset: game '" + r.game_id + "' mirrors unknown game '" + *r.mirror_of +
                      "'");
    }
    const auto& m = records_[it->second];
    if (m.mirror_of != r.game_id || m.team1 != r.team2 || m.team2 != r.team1 ||
        m.label != 1 - r.label || m.features != negated(r.features)) {
      throw DataError("dataset: games '" + r.game_id + "' and '" + m.game_id +
                      "' are not a consistent mirror pair");
    }
  }
}

bool GameSet::has_mirrors() const {
  return std::any_of(records_.begin(), records_.end(),
                     [](const GameRecord& r) { return r.mirror_of.has_value(); });
}

std::size_t GameSet::feature_dimension() const {
  return records_.empty() ? 0 : records_.front().features.size();
}

std::optional<std::size_t> GameSet::find(std::string_view game_id) const {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].game_id == game_id) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> GameSet::mirror_index(std::size_t i) const {
  const auto& r = records_.at(i);
  if (!r.mirror_of) {
    return std::nullopt;
  }
  // mirror() places the copy of record i at n/2 + i; check that first.
  const std::size_t half = records_.size() / 2;
  const std::size_t guess = i < half ? i + half : i - half;
  if (records_.size() % 2 == 0 && guess < records_.size() &&
      records_[guess].game_id == *r.mirror_of) {
    return guess;
  }
  return find(*r.mirror_of);
}

const std::vector<double>& GameSet::system_scores(std::string_view name) const {
  for (std::size_t i = 0; i < system_names_.size(); ++i) {
    if (system_names_[i] == name) {
      return system_scores_[i];
    }
  }
  throw DataError("dataset: no score column for system '" + std::string(name) + "'");
}

void GameSet::add_system_scores(std::string name, std::vector<double> scores) {
  if (scores.size() != records_.size()) {
    throw DataError("dataset: system '" + name + "' has " + std::to_string(scores.size()) +
                    " scores for " + std::to_string(records_.size()) + " games");
  }
  if (std::find(system_names_.begin(), system_names_.end(), name) != system_names_.end()) {
    throw DataError("dataset: duplicate system column '" + name + "'");
  }
  system_names_.push_back(std::move(name));
  system_scores_.push_back(std::move(scores));
}

std::vector<TeamId> GameSet::teams() const {
  std::set<TeamId> all;
  for (const auto& r : records_) {
    all.insert(r.team1);
    all.insert(r.team2);
  }
  return {all.begin(), all.end()};
}

GameSet parse_games(std::string_view text, const std::filesystem::path& source,
                    bool multi_season) {
  const csv::Table table = csv::parse(text, source);
  const std::size_t id_col = table.require_column("game_id");
  const std::size_t season_col = table.require_column("season");
  const std::size_t team1_col = table.require_column("team1");
  const std::size_t team2_col = table.require_column("team2");
  const std::size_t label_col = table.require_column("label");

  std::vector<std::size_t> feature_cols;
  std::vector<std::size_t> system_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (starts_with(name, kFeaturePrefix)) {
      feature_cols.push_back(c);
    } else if (starts_with(name, kSystemPrefix)) {
      if (name.size() == kSystemPrefix.size()) {
        throw DataError("dataset: " + source.string() + ": system column without a name");
      }
      system_cols.push_back(c);
    } else if (c != id_col && c != season_col && c != team1_col && c != team2_col &&
               c != label_col) {
      throw DataError("dataset: " + source.string() + ": unexpected column '" + name + "'");
    }
  }
  if (table.empty()) {
    throw DataError("dataset: " + source.string() + " contains no games");
  }

  std::vector<GameRecord> records;
  records.reserve(table.rows.size());
  std::vector<std::vector<double>> system_scores(system_cols.size());
  std::set<std::string> seen;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    GameRecord r;
    r.game_id = cells[id_col];
    if (!seen.insert(r.game_id).second) {
      throw DataError("dataset: " + source.string() + " line " +
                      std::to_string(table.line_numbers[row]) + ": duplicate game_id '" +
                      r.game_id + "'");
    }
    r.season = static_cast<int>(csv::parse_integer(cells[season_col], table, row));
    r.team1 = cells[team1_col];
    r.team2 = cells[team2_col];
    const long long label = csv::parse_integer(cells[label_col], table, row);
    if (label != 0 && label != 1) {
      throw DataError("dataset: " + source.string() + " line " +
                      std::to_string(table.line_numbers[row]) + ": label " +
                      std::to_string(label) + " outside {0,1}");
    }
    r.label = static_cast<int>(label);
    for (std::size_t c : feature_cols) {
      r.features.push_back(csv::parse_double(cells[c], table, row));
    }
    for (std::size_t k = 0; k < system_cols.size(); ++k) {
      system_scores[k].push_back(csv::parse_double(cells[system_cols[k]], table, row));
    }
    records.push_back(std::move(r));
  }

  // Link "<id>#m" records to "<id>".
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_id.emplace(records[i].game_id, i);
  }
  for (auto& r : records) {
    if (!ends_with(r.game_id, kMirrorSuffix)) {
      continue;
    }
    const std::string base = r.game_id.substr(0, r.game_id.size() - kMirrorSuffix.size());
    const auto it = by_id.find(base);
    if (it == by_id.end()) {
      continue;
    }
    r.mirror_of = base;
    records[it->second].mirror_of = r.game_id;
  }

  GameSet games(std::move(records), multi_season);
  for (std::size_t k = 0; k < system_cols.size(); ++k) {
    games.add_system_scores(table.header[system_cols[k]].substr(kSystemPrefix.size()),
                            std::move(system_scores[k]));
  }
  return games;
}

GameSet load_games(const std::filesystem::path& path, GameFormat format, bool multi_season) {
  if (format != GameFormat::wide_csv) {
    throw ConfigError("dataset: unsupported game format");
  }
  return parse_games(csv::read_text(path), path, multi_season);
}

std::string games_to_csv(const GameSet& games) {
  std::vector<std::string> header{"game_id", "season", "team1", "team2", "label"};
  const std::size_t dim = games.feature_dimension();
  for (std::size_t k = 0; k < dim; ++k) {
    header.push_back("f_" + std::to_string(k + 1));
  }
  for (const auto& name : games.system_names()) {
    header.push_back(std::string(kSystemPrefix) + name);
  }
  csv::Writer writer(std::move(header));
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& r = games[i];
    std::vector<std::string> cells{r.game_id, std::to_string(r.season), r.team1, r.team2,
                                   std::to_string(r.label)};
    for (double f : r.features) {
      cells.push_back(csv::format_double(f));
    }
    for (const auto& name : games.system_names()) {
      cells.push_back(csv::format_double(games.system_scores(name)[i]));
    }
    writer.add_row(std::move(cells));
  }
  return writer.str();
}

void save_games(const GameSet& games, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("dataset: cannot write " + path.string());
  }
  out << games_to_csv(games);
}

GameSet mirror(const GameSet& games) {
  if (games.has_mirrors()) {
    throw DataError("dataset: game set is already mirrored");
  }
  const std::size_t n = games.size();
  std::vector<GameRecord> records = games.records();
  records.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    GameRecord copy;
    const auto& original = games[i];
    copy.game_id = original.game_id + std::string(kMirrorSuffix);
    copy.season = original.season;
    copy.team1 = original.team2;
    copy.team2 = original.team1;
    copy.label = 1 - original.label;
    copy.features = negated(original.features);
    copy.mirror_of = original.game_id;
    records[i].mirror_of = copy.game_id;
    records.push_back(std::move(copy));
  }
  GameSet out(std::move(records), games.multi_season());
  for (const auto& name : games.system_names()) {
    std::vector<double> scores = games.system_scores(name);
    scores.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = scores[i];
      if (s < 0.0 || s > 1.0) {
        throw DataError("dataset: cannot mirror system '" + name + "': score " +
                        csv::format_double(s) + " of game '" + games[i].game_id +
                        "' is not a probability");
      }
      scores.push_back(1.0 - s);
    }
    out.add_system_scores(name, std::move(scores));
  }
  return out;
}

GameSet difference_features(const std::map<TeamId, std::vector<double>>& team_stats,
                            const GameSet& games) {
  std::optional<std::size_t> dim;
  for (const auto& [team, stats] : team_stats) {
    if (dim && stats.size() != *dim) {
      throw DataError("dataset: team '" + team + "' has " + std::to_string(stats.size()) +
                      " stats, expected " + std::to_string(*dim));
    }
    dim = stats.size();
  }
  auto lookup = [&](const TeamId& team, const std::string& game_id) -> const std::vector<double>& {
    const auto it = team_stats.find(team);
    if (it == team_stats.end()) {
      throw DataError("dataset: no stats for team '" + team + "' (game '" + game_id + "')");
    }
    return it->second;
  };
  std::vector<GameRecord> records = games.records();
  for (auto& r : records) {
    const auto& s1 = lookup(r.team1, r.game_id);
    const auto& s2 = lookup(r.team2, r.game_id);
    r.features.resize(s1.size());
    for (std::size_t k = 0; k < s1.size(); ++k) {
      r.features[k] = s1[k] - s2[k];
    }
  }
  GameSet out(std::move(records), games.multi_season());
  for (const auto& name : games.system_names()) {
    out.add_system_scores(name, games.system_scores(name));
  }
  return out;
}

std::map<TeamId, std::vector<double>> load_team_stats(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t id_col = table.require_column("team_id");
  std::map<TeamId, std::vector<double>> stats;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    std::vector<double> values;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c != id_col) {
        values.push_back(csv::parse_double(cells[c], table, row));
      }
    }
    if (!stats.emplace(cells[id_col], std::move(values)).second) {
      throw DataError("dataset: " + path.string() + ": duplicate team_id '" + cells[id_col] + "'");
    }
  }
  return stats;
}

std::vector<BaselineRanking> parse_baselines(std::string_view text,
                                             const std::filesystem::path& source) {
  const csv::Table table = csv::parse(text, source);
  std::vector<BaselineRanking> out;
  if (table.header.empty()) {
    return out;
  }
  const std::size_t name_col = table.require_column("system_name");
  auto entry_for = [&out](const std::string& name) -> BaselineRanking& {
    for (auto& b : out) {
      if (b.system_name == name) {
        return b;
      }
    }
    out.push_back(BaselineRanking{name, std::nullopt, {}});
    return out.back();
  };

  if (const auto acc_col = table.column("accuracy")) {
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
      const auto& name = table.rows[row][name_col];
      const double acc = csv::parse_double(table.rows[row][*acc_col], table, row);
      if (acc < 0.0 || acc > 1.0) {
        throw DataError("dataset: baseline '" + name + "' has accuracy " + csv::format_double(acc) +
                        " outside [0,1]");
      }
      auto& entry = entry_for(name);
      if (entry.accuracy) {
        throw DataError("dataset: baseline '" + name + "' listed twice");
      }
      entry.accuracy = acc;
    }
    return out;
  }

  const std::size_t team_col = table.require_column("team_id");
  const std::size_t rank_col = table.require_column("rank");
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    auto& entry = entry_for(cells[name_col]);
    const long long rank = csv::parse_integer(cells[rank_col], table, row);
    if (rank < 1) {
      throw DataError("dataset: baseline '" + entry.system_name + "' has nonpositive rank " +
                      std::to_string(rank));
    }
    if (!entry.team_ranks.emplace(cells[team_col], static_cast<int>(rank)).second) {
      throw DataError("dataset: baseline '" + entry.system_name + "' ranks team '" +
                      cells[team_col] + "' twice");
    }
  }
  for (const auto& entry : out) {
    std::vector<int> ranks;
    for (const auto& [team, rank] : entry.team_ranks) {
      ranks.push_back(rank);
    }
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (ranks[i] != static_cast<int>(i + 1)) {
        throw DataError("dataset: baseline '" + entry.system_name +
                        "' ranks are not a permutation of 1.." + std::to_string(ranks.size()));
      }
    }
  }
  return out;
}

std::vector<BaselineRanking> load_baselines(const std::filesystem::path& path) {
  return parse_baselines(csv::read_text(path), path);
}

void validate_results(const BracketResults& results) {
  std::set<TeamId> teams;
  for (const auto& g : results) {
    if (g.team1 == g.team2) {
      throw DataError("dataset: result in round " + std::to_string(g.round) + " pits '" + g.team1 +
                      "' against itself");
    }
    if (g.winner != g.team1 && g.winner != g.team2) {
      throw DataError("dataset: winner '" + g.winner + "' did not play in " + g.team1 + " vs " +
                      g.team2);
    }
    teams.insert(g.team1);
    teams.insert(g.team2);
  }
  if (teams.size() == 64 && results.size() != 63) {
    throw DataError("dataset: a 64-team bracket has 63 games, found " +
                    std::to_string(results.size()));
  }
}

BracketResults parse_results(std::string_view text, const std::filesystem::path& source) {
  const csv::Table table = csv::parse(text, source);
  BracketResults results;
  if (table.header.empty()) {
    return results;
  }
  const std::size_t round_col = table.require_column("round");
  const std::size_t t1_col = table.require_column("team1");
  const std::size_t t2_col = table.require_column("team2");
  const std::size_t winner_col = table.require_column("winner");
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    results.push_back(BracketGame{static_cast<int>(csv::parse_integer(cells[round_col], table, row)),
                                  cells[t1_col], cells[t2_col], cells[winner_col]});
  }
  validate_results(results);
  return results;
}

BracketResults load_results(const std::filesystem::path& path) {
  return parse_results(csv::read_text(path), path);
}

}  // namespace cfa
