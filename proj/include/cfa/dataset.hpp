#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfa {

using TeamId = std::string;

/// One game, seen from team1's side. label is 1 iff team1 won.
struct GameRecord {
  std::string game_id;
  int season = 0;
  TeamId team1;
  TeamId team2;
  int label = 0;
  std::vector<double> features;
  std::optional<std::string> mirror_of;

  bool operator==(const GameRecord&) const = default;
};

/// Suffix appended to the game_id of a mirrored copy.
inline constexpr std::string_view kMirrorSuffix = "#m";

/// True for the record added by `mirror`, false for originals.
bool is_mirror_copy(const GameRecord& record);

/// Ordered, validated list of games. Item i of every scoring system built on a
/// GameSet refers to records()[i]. Optional per-system score columns travel
/// with the games (one value per record, in record order).
class GameSet {
 public:
  GameSet() = default;
  GameSet(std::vector<GameRecord> records, bool multi_season = false);

  const std::vector<GameRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const GameRecord& operator[](std::size_t i) const { return records_.at(i); }

  bool multi_season() const noexcept { return multi_season_; }
  bool has_mirrors() const;
  std::size_t feature_dimension() const;

  /// Index of the record linked through mirror_of, if any.
  std::optional<std::size_t> mirror_index(std::size_t i) const;
  std::optional<std::size_t> find(std::string_view game_id) const;

  const std::vector<std::string>& system_names() const noexcept { return system_names_; }
  const std::vector<double>& system_scores(std::string_view name) const;
  void add_system_scores(std::string name, std::vector<double> scores);

  /// Every team appearing on either side, sorted.
  std::vector<TeamId> teams() const;

  bool operator==(const GameSet&) const = default;

 private:
  void validate() const;

  std::vector<GameRecord> records_;
  bool multi_season_ = false;
  std::vector<std::string> system_names_;
  std::vector<std::vector<double>> system_scores_;
};

enum class GameFormat { wide_csv };

/// Loads the wide CSV schema
/// `game_id,season,team1,team2,label[,f_*...][,sys_<NAME>...]`.
/// Records whose id ends in "#m" are linked to the record carrying the id
/// without the suffix.
GameSet load_games(const std::filesystem::path& path, GameFormat format = GameFormat::wide_csv,
                   bool multi_season = false);
GameSet parse_games(std::string_view text, const std::filesystem::path& source = "<memory>",
                    bool multi_season = false);
void save_games(const GameSet& games, const std::filesystem::path& path);
std::string games_to_csv(const GameSet& games);

/// Returns the originals followed by one mirrored copy per original (copy of
/// record i at index n + i): teams swapped, label flipped, features negated.
/// System score columns are complemented (1 - s) on the copies, so they must
/// lie in [0, 1].
GameSet mirror(const GameSet& games);

/// Replaces each record's features with stats(team1) - stats(team2).
GameSet difference_features(const std::map<TeamId, std::vector<double>>& team_stats,
                            const GameSet& games);

std::map<TeamId, std::vector<double>> load_team_stats(const std::filesystem::path& path);

struct BaselineRanking {
  std::string system_name;
  std::optional<double> accuracy;
  std::map<TeamId, int> team_ranks;
};

/// Accepts `system_name,accuracy` or the long form `system_name,team_id,rank`.
/// An empty file yields an empty list.
std::vector<BaselineRanking> load_baselines(const std::filesystem::path& path);
std::vector<BaselineRanking> parse_baselines(std::string_view text,
                                             const std::filesystem::path& source = "<memory>");

struct BracketGame {
  int round = 0;
  TeamId team1;
  TeamId team2;
  TeamId winner;
};

using BracketResults = std::vector<BracketGame>;

BracketResults load_results(const std::filesystem::path& path);
BracketResults parse_results(std::string_view text,
                             const std::filesystem::path& source = "<memory>");
void validate_results(const BracketResults& results);

}  // namespace cfa
