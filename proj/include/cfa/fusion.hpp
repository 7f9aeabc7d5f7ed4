#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfa/scoring.hpp"

namespace cfa {

struct DiversityMatrix;

/// SC combines score functions, RC combines rank functions.
enum class Space { score, rank };

/// AC: plain mean. WCDS: weighted by diversity strength. WCP: weighted by
/// performance.
enum class Weighting { AC, WCDS, WCP };

/// Rank combination weights each member by 1/DS or 1/P (reciprocal, the
/// default) or by DS or P directly.
enum class RankWeightMode { reciprocal, direct };

/// Diversity strength for WCDS is measured among the ensemble members
/// (ensemble) or against every system in the pool (pool).
enum class DiversityScope { ensemble, pool };

std::string_view to_string(Space space);
std::string_view to_string(Weighting weighting);
std::string_view to_string(RankWeightMode mode);
std::string_view to_string(DiversityScope scope);
Space parse_space(std::string_view text);
Weighting parse_weighting(std::string_view text);
RankWeightMode parse_rank_weight_mode(std::string_view text);
DiversityScope parse_diversity_scope(std::string_view text);

/// Indices into a list of t systems.
using Subset = std::vector<std::size_t>;

/// All subsets of {0..t-1} with at least h_min members, ordered by size and
/// then lexicographically. 2^t - 1 - t subsets when h_min = 2.
std::vector<Subset> enumerate_subsets(std::size_t t, std::size_t h_min = 2);

/// Canonical member text: names sorted, concatenated when every name is a
/// single character ("ABE"), joined with '+' otherwise ("lr+svm").
std::string members_label(std::vector<std::string> names);
std::vector<std::string> parse_members_label(std::string_view label);

struct EnsembleSpec {
  std::vector<std::string> members;  // sorted
  Space space = Space::score;
  Weighting weighting = Weighting::AC;

  std::string members_label() const;
  /// "<members>/<SC|RC>/<AC|WCDS|WCP>", e.g. "ABE/RC/WCDS".
  std::string label() const;

  bool operator==(const EnsembleSpec&) const = default;
};

EnsembleSpec parse_ensemble_label(std::string_view label);

struct CombinedSystem {
  EnsembleSpec spec;
  std::vector<double> values;
  Orientation orientation = Orientation::higher_better;
  RankVector ranks;
};

/// Score combination over `subset`. `weights` holds one value per system in
/// `systems` (DS for WCDS, P for WCP) and is ignored for AC.
CombinedSystem combine_scores(std::span<const ScoringSystem> systems, const Subset& subset,
                              Weighting weighting, std::span<const double> weights = {});

/// Rank combination over `subset`; lower combined values are better.
/// `weights` are the raw DS or P values; the reciprocal is applied here unless
/// `mode` is direct.
CombinedSystem combine_ranks(std::span<const ScoringSystem> systems, const Subset& subset,
                             Weighting weighting, std::span<const double> weights = {},
                             RankWeightMode mode = RankWeightMode::reciprocal);

struct FusionConfig {
  std::vector<Space> spaces{Space::score, Space::rank};
  std::vector<Weighting> weightings{Weighting::AC, Weighting::WCDS, Weighting::WCP};
  std::size_t h_min = 2;
  DiversityScope ds_scope = DiversityScope::ensemble;
  RankWeightMode rc_weight_mode = RankWeightMode::reciprocal;
  /// Stand-in for a zero diversity strength used as a weight.
  double ds_epsilon = 1e-12;
  /// One positive value per system; required when WCP is requested.
  std::vector<double> performance;
};

/// Every (subset x space x weighting) combination, ordered by subset
/// enumeration order, then config space order, then config weighting order.
std::vector<CombinedSystem> fuse_all(std::span<const ScoringSystem> systems,
                                     const FusionConfig& config);

/// Same as above with a precomputed pool diversity matrix.
std::vector<CombinedSystem> fuse_all(std::span<const ScoringSystem> systems,
                                     const FusionConfig& config, const DiversityMatrix& diversity);

}  // namespace cfa
