#include "cfa/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfa/error.hpp"

namespace cfa {

RankVector derive_ranks(std::span<const double> scores, Orientation orientation, TieBreak) {
  const std::size_t n = scores.size();
  if (n == 0) {
    throw DataError("scoring: cannot rank an empty score vector");
  }
  std::vector<double> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i])) {
      throw NumericError("scoring: score of item " + std::to_string(i + 1) + " is not finite");
    }
    keyed[i] = orientation == Orientation::higher_better ? scores[i] : -scores[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keyed[a] > keyed[b]; });

  // Chain neighbours within tolerance into tie groups; order each by index.
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && keyed[order[end - 1]] - keyed[order[end]] <= kTieTolerance) {
      ++end;
    }
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
              order.begin() + static_cast<std::ptrdiff_t>(end));
    begin = end;
  }

  RankVector ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    ranks[order[pos]] = pos + 1;
  }
  return ranks;
}

std::vector<std::size_t> items_by_rank(std::span<const std::size_t> ranks) {
  std::vector<std::size_t> items(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    items[ranks[i] - 1] = i;
  }
  return items;
}

ScoringSystem::ScoringSystem(std::string name, std::vector<double> scores, Orientation orientation)
    : name_(std::move(name)), scores_(std::move(scores)), orientation_(orientation) {
  ranks_ = derive_ranks(scores_, orientation_);
  rank_values_.assign(ranks_.begin(), ranks_.end());
  oriented_ = scores_;
  if (orientation_ == Orientation::lower_better) {
    for (double& s : oriented_) {
      s = -s;
    }
  }
  const auto items = items_by_rank(ranks_);
  rsc_.resize(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    rsc_[k] = oriented_[items[k]];
  }
}

std::vector<double> rsc(const ScoringSystem& system) { return system.rsc(); }

ScoringSystem normalize(const ScoringSystem& system, Normalization method) {
  if (method == Normalization::none) {
    return system;
  }
  const auto& s = system.scores();
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) {
    throw NumericError("scoring: cannot min-max normalize constant scores of system '" +
                       system.name() + "'");
  }
  std::vector<double> scaled(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    scaled[i] = (s[i] - *lo) / range;
  }
  return ScoringSystem(system.name(), std::move(scaled), system.orientation());
}

}  // namespace cfa
