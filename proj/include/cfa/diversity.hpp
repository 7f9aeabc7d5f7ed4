#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfa/scoring.hpp"

namespace cfa {

/// Cognitive diversity: root-mean-square distance between the RSC functions
/// of two systems over the same n items.
double cognitive_diversity(const ScoringSystem& a, const ScoringSystem& b);

/// Pairwise cognitive diversity over m systems with each system's diversity
/// strength (its mean diversity to the other m - 1).
struct DiversityMatrix {
  std::vector<std::string> system_names;
  std::vector<std::vector<double>> cd;
  std::vector<double> ds;

  std::size_t size() const noexcept { return system_names.size(); }

  /// Diversity strength of `members[k]` within the ensemble formed by
  /// `members` alone (indices into this matrix). Needs at least two members.
  std::vector<double> strength_within(std::span<const std::size_t> members) const;
};

DiversityMatrix diversity_strength(std::span<const ScoringSystem> systems);

}  // namespace cfa
