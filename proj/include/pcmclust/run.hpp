#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcmclust/dataset.hpp"
#include "pcmclust/diagnostics.hpp"
#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/kmedoids.hpp"
#include "pcmclust/pcm.hpp"

namespace pcmclust {

struct RunConfig {
  Measure measure = Measure::D1;
  std::size_t k = 2;
  /// Largest k of the elbow series; defaults to min(m, 10).
  std::optional<std::size_t> k_max;
  /// Matrices with a larger CR may not serve as medoids.
  std::optional<double> cr_threshold;
  Linkage linkage = Linkage::Average;
  HeightTransform dendrogram_transform = HeightTransform::Identity;
  RandomIndexTable random_index = default_random_index();
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t outlier_max_size = 1;
  ExactOptions exact{};
  /// Use PAM (flagged non-optimal, with a warning) when the exact search
  /// exceeds its node budget.
  bool heuristic_fallback = true;

  /// Throws InvalidArgument for k or k_max outside [1, m] or a negative
  /// threshold.
  void validate(std::size_t m) const;
  std::size_t effective_k_max(std::size_t m) const;
};

struct RunSummary {
  ClusteringSolution solution;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/**
 * Full analysis of a dataset: dissimilarity matrix, k-medoids solution, elbow
 * series, silhouettes, dendrogram, MDS embedding, CR boxplots, outlier flags
 * and a Markdown report, all written into `config.out_dir`. Outputs depend
 * only on the dataset and the config.
 */
RunSummary run_cluster(const Dataset& dataset, const RunConfig& config);

}  // namespace pcmclust
