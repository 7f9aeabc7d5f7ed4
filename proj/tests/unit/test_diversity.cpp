#include <cmath>
#include <random>

#include "cfa/diversity.hpp"
#include "cfa/error.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace cfa;

TEST_CASE("cognitive diversity of the hand example") {
  ScoringSystem a("A", {0.9, 0.7, 0.4, 0.1});
  ScoringSystem b("B", {0.8, 0.6, 0.5, 0.3});
  CHECK(cognitive_diversity(a, b) == doctest::Approx(std::sqrt(0.0175)).epsilon(1e-12));
  CHECK(cognitive_diversity(a, a) == 0.0);
}

TEST_CASE("cognitive diversity compares RSCs, not item order") {
  ScoringSystem a("A", {0.1, 0.9, 0.4, 0.7});
  ScoringSystem b("B", {0.5, 0.3, 0.8, 0.6});
  CHECK(cognitive_diversity(a, b) == doctest::Approx(std::sqrt(0.0175)).epsilon(1e-12));
}

TEST_CASE("cognitive diversity needs equal lengths") {
  CHECK_THROWS_AS(cognitive_diversity(ScoringSystem("A", {1, 2}), ScoringSystem("B", {1})),
                  DataError);
}

TEST_CASE("cognitive diversity matches the brute force") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 40;
    const auto x = oracle::uniform_scores(rng, n);
    const auto y = oracle::uniform_scores(rng, n);
    CHECK(cognitive_diversity(ScoringSystem("X", x), ScoringSystem("Y", y)) ==
          doctest::Approx(oracle::cd(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("diversity strength averages off-diagonal CD") {
  ScoringSystem a("A", {0.9, 0.7, 0.4, 0.1});
  ScoringSystem b("B", {0.8, 0.6, 0.5, 0.3});
  const std::vector<ScoringSystem> two{a, b};
  const auto m2 = diversity_strength(two);
  CHECK(m2.ds[0] == m2.ds[1]);
  CHECK(m2.ds[0] == cognitive_diversity(a, b));

  const std::vector<ScoringSystem> same{a, a, a};
  const auto flat = diversity_strength(same);
  for (double d : flat.ds) CHECK(d == 0.0);

  const std::vector<ScoringSystem> one{a};
  CHECK_THROWS_AS(diversity_strength(one), DataError);
}

TEST_CASE("strength_within uses only the members") {
  DiversityMatrix m;
  m.system_names = {"1", "2", "3"};
  m.cd = {{0, 0.1, 0.3}, {0.1, 0, 0.2}, {0.3, 0.2, 0}};
  const std::vector<std::size_t> all{0, 1, 2};
  const auto ds = m.strength_within(all);
  CHECK(ds[0] == doctest::Approx(0.2));
  CHECK(ds[1] == doctest::Approx(0.15));
  CHECK(ds[2] == doctest::Approx(0.25));
  const std::vector<std::size_t> pair{0, 2};
  CHECK(m.strength_within(pair) == std::vector<double>{0.3, 0.3});
}
