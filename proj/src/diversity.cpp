#include "cfa/diversity.hpp"

#include <cmath>

#include "cfa/error.hpp"
#include "cfa/kernels.hpp"

namespace cfa {

double cognitive_diversity(const ScoringSystem& a, const ScoringSystem& b) {
  if (a.size() != b.size()) {
    throw DataError("diversity: systems '" + a.name() + "' and '" + b.name() + "' cover " +
                    std::to_string(a.size()) + " and " + std::to_string(b.size()) + " items");
  }
  const double n = static_cast<double>(a.size());
  return std::sqrt(kernels::squared_distance(a.rsc(), b.rsc()) / n);
}

DiversityMatrix diversity_strength(std::span<const ScoringSystem> systems) {
  const std::size_t m = systems.size();
  if (m < 2) {
    throw DataError("diversity: need at least two systems, got " + std::to_string(m));
  }
  DiversityMatrix out;
  out.cd.assign(m, std::vector<double>(m, 0.0));
  for (const auto& s : systems) {
    out.system_names.push_back(s.name());
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double value = cognitive_diversity(systems[i], systems[j]);
      out.cd[i][j] = value;
      out.cd[j][i] = value;
    }
  }
  out.ds.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) {
        sum += out.cd[i][j];
      }
    }
    out.ds[i] = sum / static_cast<double>(m - 1);
  }
  return out;
}

std::vector<double> DiversityMatrix::strength_within(std::span<const std::size_t> members) const {
  if (members.size() < 2) {
    throw DataError("diversity: an ensemble needs at least two members");
  }
  std::vector<double> out(members.size());
  for (std::size_t a = 0; a < members.size(); ++a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (b != a) {
        sum += cd.at(members[a]).at(members[b]);
      }
    }
    out[a] = sum / static_cast<double>(members.size() - 1);
  }
  return out;
}

}  // namespace cfa
