#include "cfa/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "cfa/csv.hpp"
#include "cfa/error.hpp"
#include "cfa/parallel.hpp"
#include "cfa/reports.hpp"
#include "cfa/svg_plot.hpp"

namespace cfa {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) {
      continue;
    }
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

int parse_season(const std::string& text) {
  try {
    std::size_t used = 0;
    const int season = std::stoi(text, &used);
    if (used == text.size()) {
      return season;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + text + "' is not a season year");
}

double parse_number(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config: " + key + " = '" + text + "' is not a number");
}

std::size_t parse_count(const std::string& text, const std::string& key) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config: " + key + " = '" + text + "' is not a nonnegative integer");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") {
    return true;
  }
  if (text == "false" || text == "no" || text == "0" || text == "off") {
    return false;
  }
  throw ConfigError("config: " + key + " = '" + text + "' is not a boolean");
}

class Settings {
 public:
  Settings(const pt::ptree& tree, std::filesystem::path base) : tree_(tree), base_(std::move(base)) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto child = tree_.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!child || child->data().empty()) {
      return std::nullopt;
    }
    return child->data();
  }

  std::filesystem::path path(const std::string& value) const {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base_ / p;
  }

  const pt::ptree* section(const std::string& name) const {
    const auto child = tree_.get_child_optional(pt::ptree::path_type(name, '/'));
    return child ? &*child : nullptr;
  }

 private:
  const pt::ptree& tree_;
  std::filesystem::path base_;
};

void apply_override(pt::ptree& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("config: override '" + assignment + "' must look like section.key=value");
  }
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  tree.put(pt::ptree::path_type(section + "/" + key, '/'), assignment.substr(eq + 1));
}

void write(const csv::Writer& writer, const std::filesystem::path& path,
           std::vector<std::filesystem::path>& written) {
  writer.save(path);
  written.push_back(path);
}

}  // namespace

std::vector<std::string> PipelineConfig::system_names() const {
  std::vector<std::string> names = column_systems;
  for (const auto& b : builtin_systems) {
    names.push_back(b.name);
  }
  return names;
}

void PipelineConfig::validate() const {
  const auto names = system_names();
  if (names.size() < 2) {
    throw ConfigError("config: at least two systems are required, found " +
                      std::to_string(names.size()));
  }
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw ConfigError("config: system names must be unique");
  }
  if (season_games.empty()) {
    throw ConfigError("config: no seasons configured");
  }
  for (const auto& [season, path] : season_games) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("config: games file for season " + std::to_string(season) +
                        " not found: " + path.string());
    }
  }
  for (const auto& [season, path] : season_team_stats) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("config: team stats for season " + std::to_string(season) +
                        " not found: " + path.string());
    }
  }
  for (const auto* p : {&baselines, &results}) {
    if (*p && !std::filesystem::exists(**p)) {
      throw ConfigError("config: file not found: " + (*p)->string());
    }
  }
  if (target_season && !season_games.count(*target_season)) {
    throw ConfigError("config: target season " + std::to_string(*target_season) +
                      " has no games file");
  }
  for (int s : selection_seasons) {
    if (!season_games.count(s)) {
      throw ConfigError("config: selection season " + std::to_string(s) + " has no games file");
    }
    if (target_season && s == *target_season) {
      throw ConfigError("config: the target season cannot also be a selection season");
    }
  }
  const bool wants_wcp =
      std::find(fusion.weightings.begin(), fusion.weightings.end(), Weighting::WCP) !=
          fusion.weightings.end() ||
      deploy_weighting == Weighting::WCP;
  if (wants_wcp && explicit_performance.empty() && !validation_season) {
    throw ConfigError("config: WCP needs fusion.validation_season or fusion.performance");
  }
  if (validation_season && !season_games.count(*validation_season)) {
    throw ConfigError("config: validation season " + std::to_string(*validation_season) +
                      " has no games file");
  }
  for (const auto& [name, value] : explicit_performance) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError("config: performance given for unknown system '" + name + "'");
    }
    if (!(value > 0.0)) {
      throw ConfigError("config: performance of '" + name + "' must be positive");
    }
  }
  if (!explicit_performance.empty() && explicit_performance.size() != names.size()) {
    throw ConfigError("config: fusion.performance must list every system");
  }
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& o : overrides) {
    apply_override(tree, o);
  }
  const Settings s(tree, base_dir);
  PipelineConfig c;

  if (const auto* seasons = s.section("seasons")) {
    for (const auto& [key, value] : *seasons) {
      c.season_games[parse_season(key)] = s.path(value.data());
    }
  }
  if (const auto* stats = s.section("team_stats")) {
    for (const auto& [key, value] : *stats) {
      c.season_team_stats[parse_season(key)] = s.path(value.data());
    }
  }
  if (auto v = s.get("data", "baselines")) c.baselines = s.path(*v);
  if (auto v = s.get("data", "results")) c.results = s.path(*v);
  if (auto v = s.get("data", "output")) c.output_dir = s.path(*v);

  if (auto v = s.get("systems", "columns")) c.column_systems = split_list(*v);
  if (auto v = s.get("systems", "builtin")) {
    for (const auto& item : split_list(*v)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("config: builtin system '" + item + "' must look like NAME:logistic");
      }
      const std::string kind = item.substr(colon + 1);
      BuiltinSystem b{item.substr(0, colon), BuiltinKind::logistic};
      if (kind == "centroid") {
        b.kind = BuiltinKind::centroid;
      } else if (kind != "logistic") {
        throw ConfigError("config: unknown builtin scorer '" + kind + "'");
      }
      c.builtin_systems.push_back(b);
    }
  }
  if (auto v = s.get("systems", "normalization")) {
    if (*v == "minmax") {
      c.normalization = Normalization::minmax;
    } else if (*v != "none") {
      throw ConfigError("config: unknown normalization '" + *v + "'");
    }
  }

  if (auto v = s.get("logistic", "learning_rate")) {
    c.logistic.learning_rate = parse_number(*v, "logistic.learning_rate");
  }
  if (auto v = s.get("logistic", "iterations")) {
    c.logistic.iterations = parse_count(*v, "logistic.iterations");
  }
  if (auto v = s.get("logistic", "l2")) c.logistic.l2 = parse_number(*v, "logistic.l2");
  if (auto v = s.get("logistic", "intercept")) {
    if (*v == "auto") {
      c.logistic.intercept = InterceptMode::automatic;
    } else {
      c.logistic.intercept = parse_bool(*v, "logistic.intercept") ? InterceptMode::on
                                                                    : InterceptMode::off;
    }
  }
  if (auto v = s.get("centroid", "scale")) c.centroid_scale = parse_number(*v, "centroid.scale");

  if (auto v = s.get("fusion", "spaces")) {
    c.fusion.spaces.clear();
    for (const auto& item : split_list(*v)) c.fusion.spaces.push_back(parse_space(item));
  }
  if (auto v = s.get("fusion", "weightings")) {
    c.fusion.weightings.clear();
    for (const auto& item : split_list(*v)) c.fusion.weightings.push_back(parse_weighting(item));
  }
  if (auto v = s.get("fusion", "h_min")) {
    c.fusion.h_min = parse_count(*v, "fusion.h_min");
  }
  if (auto v = s.get("fusion", "ds_scope")) c.fusion.ds_scope = parse_diversity_scope(*v);
  if (auto v = s.get("fusion", "rc_weight_mode")) {
    c.fusion.rc_weight_mode = parse_rank_weight_mode(*v);
  }
  if (auto v = s.get("fusion", "ds_epsilon")) {
    c.fusion.ds_epsilon = parse_number(*v, "fusion.ds_epsilon");
  }
  if (auto v = s.get("fusion", "validation_season")) c.validation_season = parse_season(*v);
  if (auto v = s.get("fusion", "performance")) {
    for (const auto& item : split_list(*v)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config: performance entry '" + item + "' must look like NAME=value");
      }
      c.explicit_performance[item.substr(0, eq)] =
          parse_number(item.substr(eq + 1), "fusion.performance");
    }
  }

  if (auto v = s.get("evaluation", "mirror")) c.mirror = parse_bool(*v, "evaluation.mirror");
  if (auto v = s.get("evaluation", "prediction_mode")) {
    if (*v != "auto") c.prediction_mode = parse_prediction_mode(*v);
  }
  if (auto v = s.get("evaluation", "coverage")) c.coverage = parse_coverage(*v);

  if (auto v = s.get("selection", "seasons")) {
    for (const auto& item : split_list(*v)) c.selection_seasons.push_back(parse_season(item));
  }
  if (auto v = s.get("selection", "target")) c.target_season = parse_season(*v);
  if (auto v = s.get("selection", "count_spaces")) {
    for (const auto& item : split_list(*v)) c.counting.spaces.push_back(parse_space(item));
  }
  if (auto v = s.get("selection", "count_weightings")) {
    for (const auto& item : split_list(*v)) c.counting.weightings.push_back(parse_weighting(item));
  }
  if (auto v = s.get("selection", "deploy_weighting")) c.deploy_weighting = parse_weighting(*v);

  if (c.selection_seasons.empty()) {
    for (const auto& [season, path] : c.season_games) {
      if (!c.target_season || season != *c.target_season) {
        c.selection_seasons.push_back(season);
      }
    }
  }
  std::sort(c.selection_seasons.begin(), c.selection_seasons.end());
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = csv::read_text(path);
  } catch (const DataError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_config(text, base, overrides);
}

GameSet prepare_games(const PipelineConfig& config, int season) {
  const auto it = config.season_games.find(season);
  if (it == config.season_games.end()) {
    throw ConfigError("config: no games file for season " + std::to_string(season));
  }
  GameSet games = load_games(it->second);
  if (const auto stats = config.season_team_stats.find(season);
      stats != config.season_team_stats.end()) {
    games = difference_features(load_team_stats(stats->second), games);
  }
  if (config.mirror && !games.has_mirrors()) {
    games = mirror(games);
  }
  return games;
}

std::vector<ScoringSystem> column_scoring_systems(const GameSet& games,
                                                  const std::vector<std::string>& names) {
  const auto& chosen = names.empty() ? games.system_names() : names;
  std::vector<ScoringSystem> systems;
  for (const auto& name : chosen) {
    systems.emplace_back(name, games.system_scores(name), Orientation::higher_better);
  }
  return systems;
}

std::vector<ScoringSystem> normalize_all(const std::vector<ScoringSystem>& systems,
                                         Normalization method) {
  std::vector<ScoringSystem> out;
  out.reserve(systems.size());
  for (const auto& s : systems) {
    out.push_back(normalize(s, method));
  }
  return out;
}

std::vector<std::pair<std::string, double>> base_accuracies(
    const std::vector<ScoringSystem>& systems, const GameSet& games,
    std::optional<PredictionMode> mode) {
  const PredictionMode m = mode.value_or(default_prediction_mode(games));
  std::vector<std::pair<std::string, double>> out;
  for (const auto& s : systems) {
    out.emplace_back(s.name(), accuracy(predict(view_of(s), games, m), games));
  }
  return out;
}

std::vector<std::pair<EnsembleSpec, double>> combined_accuracies(
    const std::vector<CombinedSystem>& combined, const GameSet& games,
    std::optional<PredictionMode> mode) {
  const PredictionMode m = mode.value_or(default_prediction_mode(games));
  std::vector<std::pair<EnsembleSpec, double>> out(combined.size());
  parallel_for(combined.size(), [&](std::size_t i) {
    out[i] = {combined[i].spec, accuracy(predict(view_of(combined[i]), games, m), games)};
  });
  return out;
}

GameSet concat_seasons(const std::vector<GameSet>& seasons) {
  std::vector<GameRecord> records;
  for (const auto& games : seasons) {
    for (const auto& r : games.records()) {
      GameRecord copy = r;
      const std::string prefix = std::to_string(r.season) + ":";
      copy.game_id = prefix + r.game_id;
      if (copy.mirror_of) {
        copy.mirror_of = prefix + *copy.mirror_of;
      }
      records.push_back(std::move(copy));
    }
  }
  return GameSet(std::move(records), /*multi_season=*/true);
}

namespace {

class SeasonCache {
 public:
  explicit SeasonCache(const PipelineConfig& config) : config_(config) {}

  const GameSet& games(int season) {
    auto it = games_.find(season);
    if (it == games_.end()) {
      it = games_.emplace(season, prepare_games(config_, season)).first;
    }
    return it->second;
  }

  // Built-in scorers for `season` train on every selection season except it.
  std::vector<ScoringSystem> systems(int season) {
    const GameSet& g = games(season);
    auto systems = column_scoring_systems(g, config_.column_systems);
    if (!config_.builtin_systems.empty()) {
      std::vector<GameSet> training;
      for (int other : config_.selection_seasons) {
        if (other != season) {
          training.push_back(games(other));
        }
      }
      if (training.empty()) {
        throw ConfigError("pipeline: built-in scorers for season " + std::to_string(season) +
                          " have no other season to train on");
      }
      const GameSet train = concat_seasons(training);
      for (const auto& b : config_.builtin_systems) {
        if (b.kind == BuiltinKind::logistic) {
          systems.push_back(score(train_logistic(train, config_.logistic, b.name), g));
        } else {
          systems.push_back(score(train_centroid(train, config_.centroid_scale, b.name), g));
        }
      }
    }
    return normalize_all(systems, config_.normalization);
  }

 private:
  const PipelineConfig& config_;
  std::map<int, GameSet> games_;
};

std::vector<double> performance_weights(const PipelineConfig& config, SeasonCache& cache) {
  const auto names = config.system_names();
  std::vector<double> out;
  if (!config.explicit_performance.empty()) {
    for (const auto& n : names) {
      out.push_back(config.explicit_performance.at(n));
    }
    return out;
  }
  if (!config.validation_season) {
    return out;
  }
  const int season = *config.validation_season;
  const auto acc = base_accuracies(cache.systems(season), cache.games(season),
                                   config.prediction_mode);
  for (const auto& [name, value] : acc) {
    if (!(value > 0.0)) {
      throw NumericError("pipeline: system '" + name + "' has zero accuracy on validation season " +
                         std::to_string(season) + "; it cannot serve as a WCP weight");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

RunSummary run(const PipelineConfig& config) {
  config.validate();
  if (config.selection_seasons.empty()) {
    throw ConfigError("pipeline: no selection seasons");
  }
  RunSummary summary;
  SeasonCache cache(config);
  FusionConfig fusion = config.fusion;
  fusion.performance = performance_weights(config, cache);
  const auto& out_dir = config.output_dir;

  std::vector<YearResult> years;
  for (int season : config.selection_seasons) {
    const GameSet& games = cache.games(season);
    const auto systems = cache.systems(season);
    const auto diversity = diversity_strength(systems);
    const auto combined = fuse_all(systems, fusion, diversity);

    YearResult year;
    year.season = season;
    year.base = base_accuracies(systems, games, config.prediction_mode);
    year.combined = combined_accuracies(combined, games, config.prediction_mode);

    const auto dir = out_dir / std::to_string(season);
    std::vector<reports::FusionRow> rows;
    for (const auto& [spec, acc] : year.combined) {
      rows.push_back({spec, acc});
    }
    write(reports::fusion_report_csv(rows), dir / "fusion_report.csv", summary.written);
    write(reports::base_accuracy_csv(year.base), dir / "base_accuracy.csv", summary.written);
    write(reports::rsc_csv(systems), dir / "rsc.csv", summary.written);
    write(reports::diversity_csv(diversity), dir / "diversity.csv", summary.written);
    write(reports::strength_csv(diversity), dir / "ds.csv", summary.written);
    plot::save(plot::rsc_svg(reports::read_rsc(dir / "rsc.csv")), dir / "rsc.svg");
    plot::save(plot::performance_svg(rows, year.best_individual()), dir / "performance.svg");
    summary.written.push_back(dir / "rsc.svg");
    summary.written.push_back(dir / "performance.svg");
    years.push_back(std::move(year));
  }

  summary.table = improvement_table(years, config.counting);
  summary.selected_members = select_model(summary.table);
  write(reports::selection_csv(summary.table, summary.selected_members), out_dir / "selection.csv",
        summary.written);

  if (!config.target_season) {
    return summary;
  }

  const int target = *config.target_season;
  const GameSet& games = cache.games(target);
  const auto systems = cache.systems(target);
  const auto names = config.system_names();
  Subset subset;
  for (const auto& member : parse_members_label(summary.selected_members)) {
    subset.push_back(static_cast<std::size_t>(
        std::find(names.begin(), names.end(), member) - names.begin()));
  }
  std::sort(subset.begin(), subset.end());

  std::vector<double> weights;
  if (config.deploy_weighting == Weighting::WCDS) {
    const auto diversity = diversity_strength(systems);
    const auto strength = config.fusion.ds_scope == DiversityScope::ensemble
                              ? diversity.strength_within(subset)
                              : std::vector<double>{};
    weights.assign(systems.size(), 0.0);
    for (std::size_t k = 0; k < subset.size(); ++k) {
      double ds = config.fusion.ds_scope == DiversityScope::ensemble ? strength[k]
                                                                      : diversity.ds[subset[k]];
      if (ds == 0.0) {
        warn("pipeline: zero diversity strength for '" + names[subset[k]] + "' replaced by epsilon");
        ds = config.fusion.ds_epsilon;
      }
      weights[subset[k]] = ds;
    }
  } else if (config.deploy_weighting == Weighting::WCP) {
    weights = fusion.performance;
  }

  const auto rc = combine_ranks(systems, subset, config.deploy_weighting, weights,
                                config.fusion.rc_weight_mode);
  const auto sc = combine_scores(systems, subset, config.deploy_weighting, weights);
  const auto rc_ranking = game_to_team_ranking_rc(rc, games, config.coverage);
  const auto sc_ranking = game_to_team_ranking_sc(sc, games, config.coverage);
  const auto target_dir = out_dir / std::to_string(target);
  write(reports::rsc_csv(systems), target_dir / "rsc.csv", summary.written);
  write(reports::team_ranking_csv(rc_ranking), out_dir / "team_ranking_rc.csv", summary.written);
  write(reports::team_ranking_csv(sc_ranking), out_dir / "team_ranking_sc.csv", summary.written);

  if (config.results) {
    const auto results = load_results(*config.results);
    summary.report.entries.push_back(
        ReportEntry{rc.spec.label(), team_ranking_accuracy(rc_ranking, results), {}, {}});
    summary.report.entries.push_back(
        ReportEntry{sc.spec.label(), team_ranking_accuracy(sc_ranking, results), {}, {}});
    if (config.baselines) {
      summary.report = compare_baselines(
          summary.report, baseline_accuracies(load_baselines(*config.baselines), &results));
    }
    write(reports::evaluation_report_csv(summary.report), out_dir / "report.csv", summary.written);
  }
  return summary;
}

}  // namespace cfa
