#include "cfa/svg_plot.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "cfa/error.hpp"

namespace cfa::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 48.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) { return csv::format_fixed(v, 2); }

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Axis {
  double lo;
  double hi;
  double to_px(double v, double px_lo, double px_hi) const {
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return px_lo + t * (px_hi - px_lo);
  }
};

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n" +
         "<title>" + escape_xml(title) + "</title>\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
}

std::string axes(const std::string& x_label, const std::string& y_label, const Axis& y) {
  std::string out;
  out += "<line class=\"axis\" x1=\"" + num(kMargin) + "\" y1=\"" + num(kHeight - kMargin) +
         "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" + num(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  out += "<line class=\"axis\" x1=\"" + num(kMargin) + "\" y1=\"" + num(kMargin) + "\" x2=\"" +
         num(kMargin) + "\" y2=\"" + num(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape_xml(x_label) + "</text>\n";
  out += "<text x=\"14\" y=\"" + num(kHeight / 2) + "\" transform=\"rotate(-90 14 " +
         num(kHeight / 2) + ")\" text-anchor=\"middle\" font-size=\"12\">" + escape_xml(y_label) +
         "</text>\n";
  out += "<text x=\"" + num(kMargin - 4) + "\" y=\"" + num(kHeight - kMargin) +
         "\" text-anchor=\"end\" font-size=\"10\">" + csv::format_fixed(y.lo, 3) + "</text>\n";
  out += "<text x=\"" + num(kMargin - 4) + "\" y=\"" + num(kMargin + 4) +
         "\" text-anchor=\"end\" font-size=\"10\">" + csv::format_fixed(y.hi, 3) + "</text>\n";
  return out;
}

}  // namespace

std::string rsc_svg(std::span<const reports::RscSeries> series) {
  if (series.empty()) {
    throw DataError("plot: no RSC series to draw");
  }
  std::size_t n = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    if (s.scores.empty()) {
      throw DataError("plot: RSC series '" + s.system + "' is empty");
    }
    n = std::max(n, s.scores.size());
    for (double v : s.scores) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const Axis x{1.0, static_cast<double>(n)};
  const Axis y{lo, hi};
  std::string out = open_svg("RSC functions");
  out += axes("rank", "score", y);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string points;
    for (std::size_t r = 0; r < s.scores.size(); ++r) {
      if (r > 0) {
        points += ' ';
      }
      points += num(x.to_px(static_cast<double>(r + 1), kMargin, kWidth - kMargin)) + "," +
                num(y.to_px(s.scores[r], kHeight - kMargin, kMargin));
    }
    out += "<polyline class=\"rsc\" data-system=\"" + escape_xml(s.system) +
           "\" fill=\"none\" stroke=\"" + kPalette[k % std::size(kPalette)] +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    out += "<text x=\"" + num(kWidth - kMargin + 4) + "\" y=\"" + num(kMargin + 14.0 * k) +
           "\" font-size=\"11\" fill=\"" + kPalette[k % std::size(kPalette)] + "\">" +
           escape_xml(s.system) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string performance_svg(std::span<const reports::FusionRow> rows,
                            std::optional<double> best_individual) {
  if (rows.empty()) {
    throw DataError("plot: no ensembles to draw");
  }
  std::vector<const reports::FusionRow*> ordered;
  for (Space space : {Space::score, Space::rank}) {
    for (const auto& r : rows) {
      if (r.spec.space == space) {
        ordered.push_back(&r);
      }
    }
  }
  const Axis y{0.0, 1.0};
  const double slot = (kWidth - 2 * kMargin) / static_cast<double>(ordered.size());
  std::string out = open_svg("Combination performance");
  out += axes("ensemble", "accuracy", y);
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    const auto& r = *ordered[k];
    const double top = y.to_px(r.accuracy, kHeight - kMargin, kMargin);
    const char* colour = r.spec.space == Space::score ? "#ff7f0e" : "#1f77b4";
    out += "<rect class=\"bar\" data-label=\"" + escape_xml(r.spec.label()) + "\" x=\"" +
           num(kMargin + slot * k + slot * 0.1) + "\" y=\"" + num(top) + "\" width=\"" +
           num(slot * 0.8) + "\" height=\"" + num(kHeight - kMargin - top) + "\" fill=\"" + colour +
           "\"/>\n";
  }
  if (best_individual) {
    const double py = y.to_px(*best_individual, kHeight - kMargin, kMargin);
    out += "<line class=\"best-individual\" x1=\"" + num(kMargin) + "\" y1=\"" + num(py) +
           "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" + num(py) +
           "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void save(const std::string& svg, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("plot: cannot write " + path.string());
  }
  out << svg;
}

}  // namespace cfa::plot
