#include <algorithm>
#include <cmath>
#include <random>

#include "cfa/error.hpp"
#include "cfa/scoring.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace cfa;

TEST_CASE("derive_ranks sorts descending for higher_better") {
  const std::vector<double> s{0.9, 0.4, 0.7, 0.1};
  CHECK(derive_ranks(s, Orientation::higher_better) == RankVector{1, 3, 2, 4});
  CHECK(derive_ranks(s, Orientation::lower_better) == RankVector{4, 2, 3, 1});
}

TEST_CASE("derive_ranks edge cases") {
  CHECK(derive_ranks(std::vector<double>{5, 4, 3, 2}, Orientation::higher_better) ==
        RankVector{1, 2, 3, 4});
  CHECK(derive_ranks(std::vector<double>{0.5, 0.5, 0.2}, Orientation::higher_better) ==
        RankVector{1, 2, 3});
  CHECK_THROWS_AS(derive_ranks(std::vector<double>{}, Orientation::higher_better), DataError);
  // Within tolerance counts as a tie, so index order decides.
  CHECK(derive_ranks(std::vector<double>{0.3, 0.3 + 1e-12}, Orientation::higher_better) ==
        RankVector{1, 2});
}

TEST_CASE("derive_ranks rejects non-finite scores") {
  CHECK_THROWS_AS(derive_ranks(std::vector<double>{0.1, NAN}, Orientation::higher_better),
                  NumericError);
  CHECK_THROWS_AS(ScoringSystem("A", {0.1, INFINITY}), NumericError);
}

TEST_CASE("derive_ranks matches the brute-force rank on random data") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = oracle::uniform_scores(rng, 1 + trial % 17);
    // Force some exact ties.
    if (v.size() > 3) v[2] = v[0];
    const auto r = derive_ranks(v, Orientation::higher_better);
    const auto o = oracle::ranks(v, true);
    CHECK(std::equal(r.begin(), r.end(), o.begin(), o.end()));
  }
}

TEST_CASE("items_by_rank inverts the rank vector") {
  const RankVector r{1, 3, 2, 4};
  CHECK(items_by_rank(r) == std::vector<std::size_t>{0, 2, 1, 3});
}

TEST_CASE("RSC is the score at each rank") {
  ScoringSystem a("A", {0.9, 0.4, 0.7, 0.1});
  CHECK(a.rsc() == std::vector<double>{0.9, 0.7, 0.4, 0.1});
  CHECK(rsc(a) == a.rsc());
  CHECK(ScoringSystem("C", {0.3, 0.3, 0.3}).rsc() == std::vector<double>{0.3, 0.3, 0.3});
  CHECK(ScoringSystem("S", {0.42}).rsc() == std::vector<double>{0.42});
}

TEST_CASE("lower_better systems rank ascending and use oriented scores in the RSC") {
  ScoringSystem a("A", {3.0, 1.0, 2.0}, Orientation::lower_better);
  CHECK(a.ranks() == RankVector{3, 1, 2});
  CHECK(a.oriented_scores() == std::vector<double>{-3.0, -1.0, -2.0});
  CHECK(a.rank_values() == std::vector<double>{3, 1, 2});
  CHECK(a.rsc() == std::vector<double>{-1.0, -2.0, -3.0});
}

TEST_CASE("RSC properties hold on random systems with ties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 25;
    std::vector<double> s(n);
    for (auto& x : s) x = level(rng) / 6.0;
    ScoringSystem sys("X", s);
    const auto& f = sys.rsc();
    for (std::size_t k = 1; k < n; ++k) CHECK(f[k] <= f[k - 1]);
    auto a = f;
    auto b = s;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("minmax normalization") {
  ScoringSystem a("A", {2, 6, 4});
  CHECK(normalize(a, Normalization::minmax).scores() == std::vector<double>{0.0, 1.0, 0.5});
  CHECK(normalize(a, Normalization::minmax).ranks() == a.ranks());
  CHECK(normalize(a, Normalization::none).scores() == a.scores());
  CHECK_THROWS_AS(normalize(ScoringSystem("C", {1, 1}), Normalization::minmax), NumericError);
}
