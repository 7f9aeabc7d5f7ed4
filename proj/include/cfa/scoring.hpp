#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cfa {

enum class Orientation { higher_better, lower_better };

enum class TieBreak { stable_by_index };

enum class Normalization { none, minmax };

/// Scores closer than this are treated as tied when ranking.
inline constexpr double kTieTolerance = 1e-9;

using RankVector = std::vector<std::size_t>;

/// Rank of each item (1 = best under `orientation`). Scores within
/// kTieTolerance of each other, chained, form a tie group ordered by ascending
/// item index. Throws NumericError on NaN or infinite scores.
RankVector derive_ranks(std::span<const double> scores, Orientation orientation,
                        TieBreak tie_break = TieBreak::stable_by_index);

/// Inverse permutation: entry k is the 0-based item holding rank k + 1.
std::vector<std::size_t> items_by_rank(std::span<const std::size_t> ranks);

/// A score function over n items with its derived rank function and
/// rank-score characteristic (RSC) function. lower_better scores are negated
/// internally; ranks and the RSC refer to that higher_better form.
class ScoringSystem {
 public:
  ScoringSystem(std::string name, std::vector<double> scores,
                Orientation orientation = Orientation::higher_better);

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& scores() const noexcept { return scores_; }
  Orientation orientation() const noexcept { return orientation_; }
  std::size_t size() const noexcept { return scores_.size(); }
  /// Scores in higher_better form (negated for lower_better systems).
  const std::vector<double>& oriented_scores() const noexcept { return oriented_; }

  const RankVector& ranks() const noexcept { return ranks_; }
  /// Ranks as doubles, the form fed to rank combination.
  const std::vector<double>& rank_values() const noexcept { return rank_values_; }
  const std::vector<double>& rsc() const noexcept { return rsc_; }

 private:
  std::string name_;
  std::vector<double> scores_;
  Orientation orientation_;
  std::vector<double> oriented_;
  RankVector ranks_;
  std::vector<double> rank_values_;
  std::vector<double> rsc_;
};

/// f(i) = s(r^-1(i)) on the internal higher_better scores.
std::vector<double> rsc(const ScoringSystem& system);

ScoringSystem normalize(const ScoringSystem& system, Normalization method);

}  // namespace cfa
