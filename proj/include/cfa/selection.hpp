#pragma once

#include <string>
#include <vector>

#include "cfa/fusion.hpp"

namespace cfa {

/// Accuracies of the base systems and of every combined system for one season.
struct YearResult {
  int season = 0;
  std::vector<std::pair<std::string, double>> base;
  std::vector<std::pair<EnsembleSpec, double>> combined;

  double best_individual() const;
};

/// Restricts which (space x weighting) variants may count as an improvement.
/// Empty lists accept every variant.
struct SelectionConfig {
  std::vector<Space> spaces;
  std::vector<Weighting> weightings;
};

struct ImprovementEntry {
  std::string members;  // canonical members label, e.g. "ABE"
  std::size_t size = 0;
  std::size_t count = 0;
};

/// Per member subset, the number of seasons in which at least one accepted
/// variant beat the best base system strictly. Ordered by subset size, then
/// label.
struct ImprovementTable {
  std::vector<ImprovementEntry> entries;
  std::size_t seasons = 0;

  std::size_t count(const std::string& members) const;
};

ImprovementTable improvement_table(const std::vector<YearResult>& years,
                                   const SelectionConfig& config = {});

/// Label with the highest count; ties go to the smaller subset, then the
/// lexicographically smaller label.
std::string select_model(const ImprovementTable& table);

}  // namespace cfa
