#include "cfa/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cfa/csv.hpp"
#include "cfa/diversity.hpp"
#include "cfa/error.hpp"
#include "cfa/kernels.hpp"
#include "cfa/parallel.hpp"

namespace cfa {

std::string_view to_string(Space space) { return space == Space::score ? "SC" : "RC"; }

std::string_view to_string(Weighting weighting) {
  switch (weighting) {
    case Weighting::AC:
      return "AC";
    case Weighting::WCDS:
      return "WCDS";
    case Weighting::WCP:
      return "WCP";
  }
  return "?";
}

std::string_view to_string(RankWeightMode mode) {
  return mode == RankWeightMode::reciprocal ? "reciprocal" : "direct";
}

std::string_view to_string(DiversityScope scope) {
  return scope == DiversityScope::ensemble ? "ensemble" : "pool";
}

Space parse_space(std::string_view text) {
  if (text == "SC" || text == "score") {
    return Space::score;
  }
  if (text == "RC" || text == "rank") {
    return Space::rank;
  }
  throw ConfigError("fusion: unknown combination space '" + std::string(text) + "'");
}

Weighting parse_weighting(std::string_view text) {
  if (text == "AC") {
    return Weighting::AC;
  }
  if (text == "WCDS") {
    return Weighting::WCDS;
  }
  if (text == "WCP") {
    return Weighting::WCP;
  }
  throw ConfigError("fusion: unknown weighting '" + std::string(text) + "'");
}

RankWeightMode parse_rank_weight_mode(std::string_view text) {
  if (text == "reciprocal") {
    return RankWeightMode::reciprocal;
  }
  if (text == "direct") {
    return RankWeightMode::direct;
  }
  throw ConfigError("fusion: unknown rc_weight_mode '" + std::string(text) + "'");
}

DiversityScope parse_diversity_scope(std::string_view text) {
  if (text == "ensemble") {
    return DiversityScope::ensemble;
  }
  if (text == "pool") {
    return DiversityScope::pool;
  }
  throw ConfigError("fusion: unknown ds_scope '" + std::string(text) + "'");
}

std::vector<Subset> enumerate_subsets(std::size_t t, std::size_t h_min) {
  if (t < 2) {
    throw ConfigError("fusion: need at least two systems to combine, got " + std::to_string(t));
  }
  if (t > 20) {
    throw ConfigError("fusion: " + std::to_string(t) + " systems is too many to enumerate");
  }
  h_min = std::max<std::size_t>(h_min, 2);
  std::vector<Subset> out;
  for (std::size_t h = h_min; h <= t; ++h) {
    // Lexicographic h-combinations of {0..t-1}.
    Subset current(h);
    for (std::size_t k = 0; k < h; ++k) {
      current[k] = k;
    }
    while (true) {
      out.push_back(current);
      std::size_t k = h;
      while (k > 0 && current[k - 1] == t - h + (k - 1)) {
        --k;
      }
      if (k == 0) {
        break;
      }
      ++current[k - 1];
      for (std::size_t j = k; j < h; ++j) {
        current[j] = current[j - 1] + 1;
      }
    }
  }
  return out;
}

std::string members_label(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  const bool single_chars =
      std::all_of(names.begin(), names.end(), [](const std::string& n) { return n.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0 && !single_chars) {
      out += '+';
    }
    out += names[i];
  }
  return out;
}

std::vector<std::string> parse_members_label(std::string_view label) {
  std::vector<std::string> names;
  if (label.find('+') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= label.size()) {
      const std::size_t end = std::min(label.find('+', start), label.size());
      names.emplace_back(label.substr(start, end - start));
      start = end + 1;
    }
  } else {
    for (char c : label) {
      names.emplace_back(1, c);
    }
  }
  if (names.size() < 2 || std::any_of(names.begin(), names.end(),
                                      [](const std::string& n) { return n.empty(); })) {
    throw DataError("fusion: '" + std::string(label) + "' does not name two or more members");
  }
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size()) {
    throw DataError("fusion: '" + std::string(label) + "' repeats a member");
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string EnsembleSpec::members_label() const { return cfa::members_label(members); }

std::string EnsembleSpec::label() const {
  return members_label() + "/" + std::string(to_string(space)) + "/" +
         std::string(to_string(weighting));
}

EnsembleSpec parse_ensemble_label(std::string_view label) {
  const std::size_t first = label.find('/');
  const std::size_t second = first == std::string_view::npos ? first : label.find('/', first + 1);
  if (second == std::string_view::npos || label.find('/', second + 1) != std::string_view::npos) {
    throw DataError("fusion: malformed ensemble label '" + std::string(label) + "'");
  }
  EnsembleSpec spec;
  spec.members = parse_members_label(label.substr(0, first));
  try {
    spec.space = parse_space(label.substr(first + 1, second - first - 1));
    spec.weighting = parse_weighting(label.substr(second + 1));
  } catch (const ConfigError& e) {
    throw DataError("fusion: malformed ensemble label '" + std::string(label) + "': " + e.what());
  }
  return spec;
}

namespace {

std::size_t validate_inputs(std::span<const ScoringSystem> systems, const Subset& subset) {
  if (subset.size() < 2) {
    throw DataError("fusion: an ensemble needs at least two members");
  }
  std::set<std::size_t> seen;
  for (std::size_t idx : subset) {
    if (idx >= systems.size()) {
      throw DataError("fusion: member index " + std::to_string(idx) + " not found among " +
                      std::to_string(systems.size()) + " systems");
    }
    if (!seen.insert(idx).second) {
      throw DataError("fusion: member '" + systems[idx].name() + "' listed twice");
    }
  }
  const std::size_t n = systems[subset.front()].size();
  for (std::size_t idx : subset) {
    if (systems[idx].size() != n) {
      throw DataError("fusion: system '" + systems[idx].name() + "' covers " +
                      std::to_string(systems[idx].size()) + " items, expected " +
                      std::to_string(n));
    }
  }
  return n;
}

std::vector<double> member_weights(std::span<const ScoringSystem> systems, const Subset& subset,
                                   Weighting weighting, std::span<const double> weights) {
  std::vector<double> out(subset.size(), 1.0);
  if (weighting == Weighting::AC) {
    return out;
  }
  if (weights.size() != systems.size()) {
    throw DataError("fusion: " + std::string(to_string(weighting)) + " needs one weight per system (" +
                    std::to_string(systems.size()) + "), got " + std::to_string(weights.size()));
  }
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const double w = weights[subset[k]];
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw DataError("fusion: nonpositive " + std::string(to_string(weighting)) +
                      " weight for system '" + systems[subset[k]].name() + "'");
    }
    out[k] = w;
  }
  return out;
}

EnsembleSpec make_spec(std::span<const ScoringSystem> systems, const Subset& subset, Space space,
                       Weighting weighting) {
  EnsembleSpec spec;
  for (std::size_t idx : subset) {
    spec.members.push_back(systems[idx].name());
  }
  std::sort(spec.members.begin(), spec.members.end());
  spec.space = space;
  spec.weighting = weighting;
  return spec;
}

// Weighted mean, member by member in subset order. AC passes unit weights and
// divides by h.
std::vector<double> weighted_mean(const std::vector<const std::vector<double>*>& columns,
                                  const std::vector<double>& weights, std::size_t n) {
  std::vector<double> acc(n, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    kernels::scaled_add(acc, *columns[k], weights[k]);
    total += weights[k];
  }
  kernels::divide(acc, total);
  return acc;
}

}  // namespace

CombinedSystem combine_scores(std::span<const ScoringSystem> systems, const Subset& subset,
                              Weighting weighting, std::span<const double> weights) {
  const std::size_t n = validate_inputs(systems, subset);
  const auto w = member_weights(systems, subset, weighting, weights);
  std::vector<const std::vector<double>*> columns;
  for (std::size_t idx : subset) {
    columns.push_back(&systems[idx].oriented_scores());
  }
  CombinedSystem out;
  out.spec = make_spec(systems, subset, Space::score, weighting);
  out.values = weighted_mean(columns, w, n);
  out.orientation = Orientation::higher_better;
  out.ranks = derive_ranks(out.values, out.orientation);
  return out;
}

CombinedSystem combine_ranks(std::span<const ScoringSystem> systems, const Subset& subset,
                             Weighting weighting, std::span<const double> weights,
                             RankWeightMode mode) {
  const std::size_t n = validate_inputs(systems, subset);
  auto w = member_weights(systems, subset, weighting, weights);
  if (weighting != Weighting::AC && mode == RankWeightMode::reciprocal) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] = 1.0 / w[k];
      if (!std::isfinite(w[k]) || !(w[k] > 0.0)) {
        throw NumericError("fusion: reciprocal weight of system '" + systems[subset[k]].name() +
                           "' is not a positive finite number");
      }
    }
  }
  std::vector<const std::vector<double>*> columns;
  for (std::size_t idx : subset) {
    columns.push_back(&systems[idx].rank_values());
  }
  CombinedSystem out;
  out.spec = make_spec(systems, subset, Space::rank, weighting);
  out.values = weighted_mean(columns, w, n);
  out.orientation = Orientation::lower_better;
  out.ranks = derive_ranks(out.values, out.orientation);
  return out;
}

std::vector<CombinedSystem> fuse_all(std::span<const ScoringSystem> systems,
                                     const FusionConfig& config) {
  const bool needs_diversity =
      std::find(config.weightings.begin(), config.weightings.end(), Weighting::WCDS) !=
      config.weightings.end();
  if (!needs_diversity) {
    if (systems.size() < 2) {
      throw ConfigError("fusion: need at least two systems to combine, got " +
                        std::to_string(systems.size()));
    }
    DiversityMatrix none;
    return fuse_all(systems, config, none);
  }
  return fuse_all(systems, config, diversity_strength(systems));
}

std::vector<CombinedSystem> fuse_all(std::span<const ScoringSystem> systems,
                                     const FusionConfig& config, const DiversityMatrix& diversity) {
  const std::size_t t = systems.size();
  const auto subsets = enumerate_subsets(t, config.h_min);
  if (config.spaces.empty() || config.weightings.empty()) {
    throw ConfigError("fusion: at least one space and one weighting are required");
  }
  const bool wants_wcp = std::find(config.weightings.begin(), config.weightings.end(),
                                   Weighting::WCP) != config.weightings.end();
  const bool wants_wcds = std::find(config.weightings.begin(), config.weightings.end(),
                                    Weighting::WCDS) != config.weightings.end();
  if (wants_wcp && config.performance.size() != t) {
    throw ConfigError("fusion: WCP needs one performance value per system (" + std::to_string(t) +
                      "), got " + std::to_string(config.performance.size()));
  }
  if (wants_wcds && diversity.size() != t) {
    throw ConfigError("fusion: diversity matrix covers " + std::to_string(diversity.size()) +
                      " systems, expected " + std::to_string(t));
  }
  if (!(config.ds_epsilon > 0.0)) {
    throw ConfigError("fusion: ds_epsilon must be positive");
  }

  // Per-subset DS weights, laid out per system so the combiners can index them.
  std::vector<std::vector<double>> ds_weights(subsets.size());
  std::size_t substituted = 0;
  if (wants_wcds) {
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      auto& weights = ds_weights[s];
      weights.assign(t, 0.0);
      const auto strength = config.ds_scope == DiversityScope::ensemble
                                ? diversity.strength_within(subsets[s])
                                : std::vector<double>{};
      for (std::size_t k = 0; k < subsets[s].size(); ++k) {
        const std::size_t idx = subsets[s][k];
        double ds = config.ds_scope == DiversityScope::ensemble ? strength[k] : diversity.ds[idx];
        if (ds == 0.0) {
          ds = config.ds_epsilon;
          ++substituted;
        }
        weights[idx] = ds;
      }
    }
  }
  if (substituted > 0) {
    warn("fusion: " + std::to_string(substituted) +
         " zero diversity strength weight(s) replaced by " + csv::format_double(config.ds_epsilon));
  }

  const std::size_t per_subset = config.spaces.size() * config.weightings.size();
  std::vector<CombinedSystem> out(subsets.size() * per_subset);
  parallel_for(out.size(), [&](std::size_t slot) {
    const std::size_t s = slot / per_subset;
    const Space space = config.spaces[(slot % per_subset) / config.weightings.size()];
    const Weighting weighting = config.weightings[slot % config.weightings.size()];
    std::span<const double> weights;
    if (weighting == Weighting::WCDS) {
      weights = ds_weights[s];
    } else if (weighting == Weighting::WCP) {
      weights = config.performance;
    }
    out[slot] = space == Space::score
                    ? combine_scores(systems, subsets[s], weighting, weights)
                    : combine_ranks(systems, subsets[s], weighting, weights, config.rc_weight_mode);
  });
  return out;
}

}  // namespace cfa
