#include "cfa/selection.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "cfa/error.hpp"

namespace cfa {

double YearResult::best_individual() const {
  if (base.empty()) {
    throw DataError("selection: season " + std::to_string(season) + " has no base systems");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, acc] : base) {
    best = std::max(best, acc);
  }
  return best;
}

std::size_t ImprovementTable::count(const std::string& members) const {
  for (const auto& e : entries) {
    if (e.members == members) {
      return e.count;
    }
  }
  return 0;
}

ImprovementTable improvement_table(const std::vector<YearResult>& years,
                                   const SelectionConfig& config) {
  if (years.empty()) {
    throw DataError("selection: no seasons to count improvements over");
  }
  auto base_names = [](const YearResult& y) {
    std::set<std::string> names;
    for (const auto& [name, acc] : y.base) {
      names.insert(name);
    }
    return names;
  };
  const auto reference = base_names(years.front());
  auto accepted = [&config](const EnsembleSpec& spec) {
    const bool space_ok = config.spaces.empty() ||
                          std::find(config.spaces.begin(), config.spaces.end(), spec.space) !=
                              config.spaces.end();
    const bool weighting_ok =
        config.weightings.empty() ||
        std::find(config.weightings.begin(), config.weightings.end(), spec.weighting) !=
            config.weightings.end();
    return space_ok && weighting_ok;
  };

  std::map<std::string, ImprovementEntry> by_label;
  for (const auto& year : years) {
    if (base_names(year) != reference) {
      throw DataError("selection: season " + std::to_string(year.season) +
                      " has a different set of base systems");
    }
    const double best = year.best_individual();
    std::set<std::string> improved;
    for (const auto& [spec, acc] : year.combined) {
      for (const auto& m : spec.members) {
        if (!reference.count(m)) {
          throw DataError("selection: ensemble '" + spec.label() + "' in season " +
                          std::to_string(year.season) + " uses unknown system '" + m + "'");
        }
      }
      const std::string label = spec.members_label();
      by_label.try_emplace(label, ImprovementEntry{label, spec.members.size(), 0});
      if (accepted(spec) && acc > best) {
        improved.insert(label);
      }
    }
    for (const auto& label : improved) {
      ++by_label[label].count;
    }
  }

  ImprovementTable table;
  table.seasons = years.size();
  for (auto& [label, entry] : by_label) {
    table.entries.push_back(entry);
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const ImprovementEntry& a, const ImprovementEntry& b) {
              return a.size != b.size ? a.size < b.size : a.members < b.members;
            });
  return table;
}

std::string select_model(const ImprovementTable& table) {
  if (table.entries.empty()) {
    throw DataError("selection: improvement table is empty");
  }
  const auto best = std::min_element(
      table.entries.begin(), table.entries.end(),
      [](const ImprovementEntry& a, const ImprovementEntry& b) {
        if (a.count != b.count) {
          return a.count > b.count;
        }
        if (a.size != b.size) {
          return a.size < b.size;
        }
        return a.members < b.members;
      });
  return best->members;
}

}  // namespace cfa
