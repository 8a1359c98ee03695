#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/kmedoids.hpp"
#include "pcmclust/pcm.hpp"

namespace pcmclust {

// ---------------------------------------------------------------------------
// Elbow curve
// ---------------------------------------------------------------------------

struct ElbowPoint {
  std::size_t k;
  double objective;
  bool optimal;
  std::vector<std::size_t> medoids;
};

struct ElbowSeries {
  std::vector<ElbowPoint> points;
};

struct ElbowOptions {
  ExactOptions exact{};
  /// On SearchBudgetExceeded use PAM for that k instead of failing; such
  /// points are flagged non-optimal.
  bool heuristic_fallback = false;
  std::uint64_t seed = 0;
};

/// Optimal k-medoids objective for k = 1..k_max.
ElbowSeries elbow(const DissimilarityMatrix& delta, std::size_t k_max,
                  const std::set<std::size_t>& forbidden = {}, const ElbowOptions& options = {});

/// TSV columns: k, objective, optimal, mean_silhouette (NA where not given).
void write_elbow_tsv(std::ostream& os, const ElbowSeries& series,
                     const std::vector<std::optional<double>>& mean_silhouette = {});

// ---------------------------------------------------------------------------
// Silhouette
// ---------------------------------------------------------------------------

struct SilhouetteReport {
  std::vector<double> per_object;
  double mean = 0.0;
  std::size_t k = 0;
};

/// s_i = (b_i - a_i) / max(a_i, b_i), with s_i = 0 for members of singleton
/// clusters. Throws SingleCluster when k = 1.
SilhouetteReport silhouette(const DissimilarityMatrix& delta, const ClusteringSolution& solution);

/// TSV columns: label, cluster, silhouette.
void write_silhouette_tsv(std::ostream& os, const SilhouetteReport& report,
                          const DissimilarityMatrix& delta, const ClusteringSolution& solution);

// ---------------------------------------------------------------------------
// Agglomerative clustering
// ---------------------------------------------------------------------------

enum class Linkage { Average, Single, Complete };
enum class HeightTransform { Identity, Square };

std::string_view to_string(Linkage l) noexcept;
Linkage parse_linkage(std::string_view text);

/// One merge: clusters are numbered 0..m-1 for leaves and m, m+1, ... for the
/// cluster formed by merge 0, 1, ...
struct Merge {
  std::size_t a;
  std::size_t b;
  double height;
  std::size_t size;
};

struct Dendrogram {
  std::vector<Merge> merges;
  std::vector<std::string> leaf_labels;
};

/**
 * Greedy agglomeration (Lance-Williams updates, O(m^3)). The closest pair is
 * merged first; ties go to the pair with the smallest cluster ids. The
 * transform is applied to the dissimilarities before clustering.
 */
Dendrogram agglomerate(const DissimilarityMatrix& delta, Linkage linkage = Linkage::Average,
                       HeightTransform transform = HeightTransform::Identity);

/// Newick text; branch lengths are height differences, leaves sit at height 0.
std::string to_newick(const Dendrogram& tree);

/// Merge table as TSV: step, cluster_a, cluster_b, height, size.
void write_merge_table(std::ostream& os, const Dendrogram& tree);

// ---------------------------------------------------------------------------
// Inconsistency per cluster
// ---------------------------------------------------------------------------

/// Boxplot statistics; quartiles use linear interpolation between order
/// statistics. Whiskers reach the most extreme values inside the 1.5 IQR fences.
struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
};

/// Throws EmptyInput for an empty sample.
BoxStats box_stats(std::vector<double> values);

struct ClusterCrStats {
  std::size_t medoid;
  std::size_t size;
  BoxStats cr;
  std::vector<std::size_t> outliers;  // object indices outside the fences
};

struct ClusterInconsistencySummary {
  std::vector<ClusterCrStats> clusters;
  std::vector<double> cr;  // per object
};

/// Throws IncompleteMatrix.
ClusterInconsistencySummary cluster_cr_summary(const std::vector<Pcm>& pcms,
                                               const ClusteringSolution& solution,
                                               const RandomIndexTable& ri = default_random_index());

}  // namespace pcmclust
