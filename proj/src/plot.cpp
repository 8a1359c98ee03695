#include "pcmclust/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "pcmclust/format.hpp"

namespace pcmclust {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 50.0;

constexpr std::array<const char*, 10> kPalette{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Linear map from [lo, hi] onto [a, b]; a degenerate range maps to the middle.
struct Axis {
  double lo, hi, a, b;
  double operator()(double v) const {
    if (hi - lo <= 0.0) return 0.5 * (a + b);
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

void open_svg(std::ostream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

void write_mds_svg(std::ostream& os, const EmbeddingResult& embedding,
                   const DissimilarityMatrix& delta, const ClusteringSolution* solution) {
  const std::size_t m = delta.size();
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = embedding.coord(i, 0);
    const double y = embedding.dim > 1 ? embedding.coord(i, 1) : 0.0;
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  // Equal scaling on both axes keeps distances visually faithful.
  const double span = std::max(x_hi - x_lo, y_hi - y_lo);
  const double cx = 0.5 * (x_lo + x_hi);
  const double cy = 0.5 * (y_lo + y_hi);
  const double side = std::min(kWidth, kHeight) - 2.0 * kMargin;
  const Axis sx{cx - span / 2, cx + span / 2, kWidth / 2 - side / 2, kWidth / 2 + side / 2};
  const Axis sy{cy - span / 2, cy + span / 2, kHeight / 2 + side / 2, kHeight / 2 - side / 2};

  open_svg(os);
  os << "<line x1=\"" << kMargin << "\" y1=\"" << format_fixed(sy(0.0), 2) << "\" x2=\""
     << kWidth - kMargin << "\" y2=\"" << format_fixed(sy(0.0), 2)
     << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << format_fixed(sx(0.0), 2) << "\" y1=\"" << kMargin << "\" x2=\""
     << format_fixed(sx(0.0), 2) << "\" y2=\"" << kHeight - kMargin
     << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << "MDS coordinates, stress " << format_fixed(embedding.stress, 3) << "</text>\n";

  for (std::size_t i = 0; i < m; ++i) {
    const double x = sx(embedding.coord(i, 0));
    const double y = sy(embedding.dim > 1 ? embedding.coord(i, 1) : 0.0);
    std::size_t cluster = 0;
    bool medoid = false;
    if (solution != nullptr) {
      cluster = solution->cluster_of(i);
      medoid = solution->assignment[i] == i;
    }
    const char* colour = kPalette[cluster % kPalette.size()];
    const double r = medoid ? 7.0 : 3.5;
    os << "<circle cx=\"" << format_fixed(x, 2) << "\" cy=\"" << format_fixed(y, 2) << "\" r=\""
       << r << "\" fill=\"" << colour << "\"" << (medoid ? " stroke=\"black\"" : "") << ">"
       << "<title>" << xml_escape(delta.labels()[i]) << "</title></circle>\n";
  }
  os << "</svg>\n";
}

void write_elbow_svg(std::ostream& os, const ElbowSeries& series) {
  open_svg(os);
  if (series.points.empty()) {
    os << "</svg>\n";
    return;
  }
  double y_hi = 0.0;
  for (const auto& p : series.points) y_hi = std::max(y_hi, p.objective);
  const auto k_lo = static_cast<double>(series.points.front().k);
  const auto k_hi = static_cast<double>(series.points.back().k);
  const Axis sx{k_lo - 0.5, k_hi + 0.5, kMargin, kWidth - kMargin};
  const Axis sy{0.0, y_hi > 0.0 ? y_hi * 1.05 : 1.0, kHeight - kMargin, kMargin};

  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
     << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
     << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">Number of clusters k</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
     << ")\" text-anchor=\"middle\" font-size=\"13\">Optimal objective</text>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const auto& p : series.points) {
    os << format_fixed(sx(static_cast<double>(p.k)), 2) << ','
       << format_fixed(sy(p.objective), 2) << ' ';
  }
  os << "\"/>\n";
  for (const auto& p : series.points) {
    const double x = sx(static_cast<double>(p.k));
    os << "<circle cx=\"" << format_fixed(x, 2) << "\" cy=\"" << format_fixed(sy(p.objective), 2)
       << "\" r=\"4\" fill=\"" << (p.optimal ? "#1f77b4" : "white")
       << "\" stroke=\"#1f77b4\"><title>k=" << p.k << ": " << format_fixed(p.objective, 3)
       << "</title></circle>\n";
    os << "<text x=\"" << format_fixed(x, 2) << "\" y=\"" << kHeight - kMargin + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << p.k << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace pcmclust
