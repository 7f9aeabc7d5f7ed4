#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfa/reports.hpp"

namespace cfa::plot {

/// One polyline per system: x = rank (1..n), y = score at that rank.
std::string rsc_svg(std::span<const reports::RscSeries> series);

/// One bar per ensemble, SC bars first then RC, each group in report order.
/// A dotted horizontal line marks the best individual accuracy when given.
std::string performance_svg(std::span<const reports::FusionRow> rows,
                            std::optional<double> best_individual);

void save(const std::string& svg, const std::filesystem::path& path);

}  // namespace cfa::plot
