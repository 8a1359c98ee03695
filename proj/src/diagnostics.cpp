#include "pcmclust/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"

namespace pcmclust {

ElbowSeries elbow(const DissimilarityMatrix& delta, std::size_t k_max,
                  const std::set<std::size_t>& forbidden, const ElbowOptions& options) {
  if (k_max == 0 || k_max > delta.size()) {
    throw Error(Errc::InvalidArgument, "k_max must lie in [1, " + std::to_string(delta.size()) +
                                           "]");
  }
  ElbowSeries series;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const KMedoidsProblem problem{delta, k, forbidden};
    try {
      const auto s = solve_exact(problem, options.exact);
      series.points.push_back({k, s.objective, true, s.medoids});
    } catch (const Error& e) {
      if (e.code() != Errc::SearchBudgetExceeded || !options.heuristic_fallback) throw;
      const auto s = solve_pam(problem, options.seed);
      series.points.push_back({k, s.objective, false, s.medoids});
    }
  }
  return series;
}

void write_elbow_tsv(std::ostream& os, const ElbowSeries& series,
                     const std::vector<std::optional<double>>& mean_silhouette) {
  os << "k\tobjective\toptimal\tmean_silhouette\n";
  for (std::size_t r = 0; r < series.points.size(); ++r) {
    const auto& p = series.points[r];
    os << p.k << '\t' << format_exact(p.objective) << '\t' << (p.optimal ? "true" : "false")
       << '\t';
    if (r < mean_silhouette.size() && mean_silhouette[r]) {
      os << format_exact(*mean_silhouette[r]);
    } else {
      os << "NA";
    }
    os << '\n';
  }
}

SilhouetteReport silhouette(const DissimilarityMatrix& delta, const ClusteringSolution& solution) {
  const std::size_t m = delta.size();
  const std::size_t k = solution.k();
  if (k < 2) throw Error(Errc::SingleCluster, "silhouette needs at least two clusters");
  if (solution.assignment.size() != m) {
    throw Error(Errc::LengthMismatch, "solution does not match the dissimilarity matrix");
  }

  std::vector<std::size_t> cluster(m);
  std::vector<std::size_t> size(k, 0);
  for (std::size_t i = 0; i < m; ++i) {
    cluster[i] = solution.cluster_of(i);
    ++size[cluster[i]];
  }

  SilhouetteReport r;
  r.k = k;
  r.per_object.assign(m, 0.0);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t own = cluster[i];
    if (size[own] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) sums[cluster[j]] += delta(i, j);
    const double a = sums[own] / static_cast<double>(size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(size[c]));
    const double scale = std::max(a, b);
    r.per_object[i] = scale > 0.0 ? (b - a) / scale : 0.0;
  }
  double total = 0.0;
  for (double s : r.per_object) total += s;
  r.mean = total / static_cast<double>(m);
  return r;
}

void write_silhouette_tsv(std::ostream& os, const SilhouetteReport& report,
                          const DissimilarityMatrix& delta, const ClusteringSolution& solution) {
  os << "label\tcluster\tsilhouette\n";
  for (std::size_t i = 0; i < report.per_object.size(); ++i) {
    os << delta.labels()[i] << '\t' << solution.cluster_of(i) + 1 << '\t'
       << format_exact(report.per_object[i]) << '\n';
  }
}

std::string_view to_string(Linkage l) noexcept {
  switch (l) {
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
  }
  return "average";
}

Linkage parse_linkage(std::string_view text) {
  if (text == "average") return Linkage::Average;
  if (text == "single") return Linkage::Single;
  if (text == "complete") return Linkage::Complete;
  throw Error(Errc::InvalidArgument,
              "unknown linkage '" + std::string(text) + "' (expected average|single|complete)");
}

Dendrogram agglomerate(const DissimilarityMatrix& delta, Linkage linkage,
                       HeightTransform transform) {
  const std::size_t m = delta.size();
  if (m < 2) throw Error(Errc::EmptyInput, "agglomeration needs at least two objects");

  // Working distances between active clusters, indexed by slot; slot s holds
  // cluster id ids[s].
  std::vector<double> d(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double x = delta(i, j);
      d[i * m + j] = transform == HeightTransform::Square ? x * x : x;
    }
  }
  std::vector<std::size_t> ids(m);
  std::vector<std::size_t> sizes(m, 1);
  std::vector<bool> active(m, true);
  for (std::size_t i = 0; i < m; ++i) ids[i] = i;

  Dendrogram tree;
  tree.leaf_labels = delta.labels();
  tree.merges.reserve(m - 1);

  for (std::size_t step = 0; step + 1 < m; ++step) {
    std::size_t best_a = m;
    std::size_t best_b = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < m; ++b) {
        if (!active[b]) continue;
        const double x = d[a * m + b];
        bool better = best_a == m || x < best;
        if (!better && x == best) {
          const auto key = std::minmax(ids[a], ids[b]);
          better = key < std::minmax(ids[best_a], ids[best_b]);
        }
        if (better) {
          best = x;
          best_a = a;
          best_b = b;
        }
      }
    }

    const std::size_t na = sizes[best_a];
    const std::size_t nb = sizes[best_b];
    for (std::size_t c = 0; c < m; ++c) {
      if (!active[c] || c == best_a || c == best_b) continue;
      const double da = d[c * m + best_a];
      const double db = d[c * m + best_b];
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Average:
          merged = (static_cast<double>(na) * da + static_cast<double>(nb) * db) /
                   static_cast<double>(na + nb);
          break;
        case Linkage::Single: merged = std::min(da, db); break;
        case Linkage::Complete: merged = std::max(da, db); break;
      }
      d[c * m + best_a] = merged;
      d[best_a * m + c] = merged;
    }

    tree.merges.push_back({std::min(ids[best_a], ids[best_b]), std::max(ids[best_a], ids[best_b]),
                           best, na + nb});
    ids[best_a] = m + step;
    sizes[best_a] = na + nb;
    active[best_b] = false;
  }
  return tree;
}

namespace {

std::string newick_label(const std::string& label) {
  const bool plain = !label.empty() && label.find_first_of(" \t()[]':;,") == std::string::npos;
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace

std::string to_newick(const Dendrogram& tree) {
  const std::size_t m = tree.leaf_labels.size();
  auto height = [&](std::size_t id) { return id < m ? 0.0 : tree.merges[id - m].height; };

  std::function<std::string(std::size_t, double)> node = [&](std::size_t id, double parent) {
    std::string s;
    if (id < m) {
      s = newick_label(tree.leaf_labels[id]);
    } else {
      const Merge& mg = tree.merges[id - m];
      s = "(" + node(mg.a, mg.height) + "," + node(mg.b, mg.height) + ")";
    }
    return s + ":" + format_exact(parent - height(id));
  };

  if (tree.merges.empty()) return newick_label(tree.leaf_labels.at(0)) + ";\n";
  const Merge& root = tree.merges.back();
  return "(" + node(root.a, root.height) + "," + node(root.b, root.height) + ");\n";
}

void write_merge_table(std::ostream& os, const Dendrogram& tree) {
  const std::size_t m = tree.leaf_labels.size();
  auto name = [&](std::size_t id) {
    return id < m ? tree.leaf_labels[id] : "#" + std::to_string(id - m + 1);
  };
  os << "step\tcluster_a\tcluster_b\theight\tsize\n";
  for (std::size_t t = 0; t < tree.merges.size(); ++t) {
    const Merge& mg = tree.merges[t];
    os << t + 1 << '\t' << name(mg.a) << '\t' << name(mg.b) << '\t' << format_exact(mg.height)
       << '\t' << mg.size << '\n';
  }
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "box statistics of an empty sample");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
  };
  BoxStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.max;
  s.whisker_high = s.min;
  for (double v : values) {
    if (v >= low_fence) s.whisker_low = std::min(s.whisker_low, v);
    if (v <= high_fence) s.whisker_high = std::max(s.whisker_high, v);
  }
  return s;
}

ClusterInconsistencySummary cluster_cr_summary(const std::vector<Pcm>& pcms,
                                               const ClusteringSolution& solution,
                                               const RandomIndexTable& ri) {
  if (pcms.size() != solution.assignment.size()) {
    throw Error(Errc::LengthMismatch, "solution does not match the matrix list");
  }
  ClusterInconsistencySummary out;
  out.cr.reserve(pcms.size());
  for (const auto& p : pcms) out.cr.push_back(consistency_report(p, ri).cr);

  for (std::size_t c = 0; c < solution.k(); ++c) {
    const auto members = solution.members(c);
    std::vector<double> values;
    values.reserve(members.size());
    for (std::size_t i : members) values.push_back(out.cr[i]);
    ClusterCrStats stats{solution.medoids[c], members.size(), box_stats(values), {}};
    const double iqr = stats.cr.q3 - stats.cr.q1;
    for (std::size_t i : members) {
      if (out.cr[i] < stats.cr.q1 - 1.5 * iqr || out.cr[i] > stats.cr.q3 + 1.5 * iqr) {
        stats.outliers.push_back(i);
      }
    }
    out.clusters.push_back(std::move(stats));
  }
  return out;
}

}  // namespace pcmclust
