#include <map>

#include "cfa/csv.hpp"
#include "cfa/error.hpp"
#include "cfa/pipeline.hpp"
#include "cfa/reports.hpp"
#include "doctest.h"
#include "support/temp_dir.hpp"

using namespace cfa;

namespace {

const std::filesystem::path kSynthetic = std::filesystem::path(CFA_FIXTURE_DIR) / "synthetic";

PipelineConfig fixture_config(const std::filesystem::path& out, const std::string& file = "config.ini") {
  return load_config(kSynthetic / file, {"data.output=" + out.string()});
}

}  // namespace

TEST_CASE("config parsing") {
  testing::TempDir dir;
  dir.write("g.csv", "game_id,season,team1,team2,label,sys_A,sys_B\nG1,2020,X,Y,1,0.6,0.7\n");
  const auto c = parse_config(
      "[seasons]\n2020 = g.csv\n[systems]\ncolumns = A, B\n"
      "[fusion]\nspaces = RC\nweightings = AC,WCP\nperformance = A=0.7, B=0.6\n"
      "[evaluation]\nmirror = true\ncoverage = lenient\n",
      dir.path());
  CHECK(c.season_games.at(2020) == dir.path() / "g.csv");
  CHECK(c.system_names() == std::vector<std::string>{"A", "B"});
  CHECK(c.fusion.spaces == std::vector<Space>{Space::rank});
  CHECK(c.explicit_performance.at("B") == 0.6);
  CHECK(c.mirror);
  CHECK(c.coverage == Coverage::lenient);
  CHECK(c.fusion.ds_scope == DiversityScope::ensemble);
  CHECK(c.deploy_weighting == Weighting::WCDS);
}

TEST_CASE("config validation errors") {
  testing::TempDir dir;
  dir.write("g.csv", "game_id,season,team1,team2,label,sys_A\nG1,2020,X,Y,1,0.6\n");
  CHECK_THROWS_AS(parse_config("[seasons]\n2020 = g.csv\n[systems]\ncolumns = A\n", dir.path()).validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[seasons]\n2020 = missing.csv\n[systems]\ncolumns = A,B\n", dir.path()).validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[seasons]\n2020 = g.csv\n[systems]\ncolumns = A,B\n"
                               "[fusion]\nweightings = WCP\n",
                               dir.path())
                      .validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[seasons]\nnext = g.csv\n[systems]\ncolumns = A,B\n", dir.path()).validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[seasons]\n2020 = g.csv\n[systems]\ncolumns = A,B\n",
                               dir.path(), {"fusion.h_min"}),
                  ConfigError);
  CHECK_THROWS_AS(load_config(dir.path() / "nope.ini"), ConfigError);
  for (const char* bad : {"fusion.h_min=2.5", "fusion.h_min=-1", "logistic.iterations=many"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config("[seasons]\n2020 = g.csv\n[systems]\ncolumns = A,B\n", dir.path(), {bad}),
                    ConfigError);
  }
}

TEST_CASE("overrides replace file values") {
  const auto c = load_config(kSynthetic / "config.ini", {"fusion.weightings=AC", "selection.target=2023"});
  CHECK(c.fusion.weightings == std::vector<Weighting>{Weighting::AC});
  CHECK(c.target_season == 2023);
}

TEST_CASE("concat_seasons prefixes ids") {
  const auto a = parse_games("game_id,season,team1,team2,label\nG1,2020,X,Y,1\n");
  const auto b = parse_games("game_id,season,team1,team2,label\nG1,2021,X,Y,0\n");
  const auto both = concat_seasons({a, b});
  CHECK(both.size() == 2);
  CHECK(both.multi_season());
  CHECK(both[1].game_id == "2021:G1");
}

TEST_CASE("synthetic fixture run matches the oracle tables") {
  testing::TempDir dir;
  const auto summary = run(fixture_config(dir.path()));
  CHECK(summary.selected_members == "ABE");

  const auto expected = csv::read(kSynthetic / "expected_counts.csv");
  REQUIRE(expected.rows.size() == 26);
  for (std::size_t r = 0; r < expected.rows.size(); ++r) {
    CAPTURE(expected.rows[r][0]);
    CHECK(summary.table.count(expected.rows[r][0]) ==
          static_cast<std::size_t>(csv::parse_integer(expected.rows[r][1], expected, r)));
  }

  // Every per-season accuracy agrees exactly with the independent oracle.
  const auto acc = csv::read(kSynthetic / "expected_accuracy.csv");
  std::map<std::string, std::map<std::string, double>> got;
  for (int season = 2014; season <= 2023; ++season) {
    const auto dirname = dir.path() / std::to_string(season);
    const auto fusion = reports::read_fusion_report(dirname / "fusion_report.csv");
    CHECK(fusion.size() == 52);
    for (const auto& row : fusion) got[std::to_string(season)][row.spec.label()] = row.accuracy;
    for (const auto& [name, a] : reports::read_base_accuracy(dirname / "base_accuracy.csv")) {
      got[std::to_string(season)][name] = a;
    }
  }
  for (std::size_t r = 0; r < acc.rows.size(); ++r) {
    CAPTURE(acc.rows[r][1]);
    CHECK(got.at(acc.rows[r][0]).at(acc.rows[r][1]) == csv::parse_double(acc.rows[r][2], acc, r));
  }

  for (const char* f : {"selection.csv", "team_ranking_rc.csv", "team_ranking_sc.csv", "report.csv",
                        "2014/rsc.svg", "2014/performance.svg", "2014/diversity.csv", "2024/rsc.csv"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(dir.path() / f));
  }
  CHECK(reports::read_team_ranking(dir.path() / "team_ranking_rc.csv").entries.size() == 64);
  REQUIRE(summary.report.entries.size() == 2);
  for (const auto& e : summary.report.entries) {
    const double k = e.accuracy * 63.0;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("builtin scorer config runs") {
  testing::TempDir dir;
  const auto summary = run(fixture_config(dir.path(), "config_builtin.ini"));
  CHECK(summary.table.seasons == 9);
  CHECK_FALSE(summary.selected_members.empty());
  const auto base = reports::read_base_accuracy(dir.path() / "2015" / "base_accuracy.csv");
  REQUIRE(base.size() == 5);
  CHECK(base[3].first == "L");
  CHECK(base[4].first == "N");
  CHECK(reports::read_fusion_report(dir.path() / "2015" / "fusion_report.csv").size() == 156);
}
