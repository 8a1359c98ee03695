#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/pcm.hpp"

namespace pcmclust {

struct AggregationOutcome {
  Pcm aggregate;
  WeightVector weights;
  std::vector<std::size_t> ranking;
  /// "geometric_mean" or "medoid_D1", "medoid_D3", ...
  std::string method;
  /// Index of the chosen input matrix for medoid aggregation.
  std::optional<std::size_t> medoid;
  /// Sum of dissimilarities to the medoid (one-cluster k-medoids optimum).
  std::optional<double> objective;
};

/**
 * Entrywise geometric mean of the inputs, then row-geometric-mean weights.
 * An entry missing from some inputs is averaged over the matrices that have
 * it; an entry missing from all of them raises IncompleteMatrix. Throws
 * EmptyInput and OrderMismatch.
 */
AggregationOutcome aggregate_geometric(const std::vector<Pcm>& pcms);

/// The one-cluster k-medoids centre: the input matrix minimizing the summed
/// dissimilarity to all others (lowest index on ties). The aggregate must be
/// complete for weights to exist (IncompleteMatrix otherwise).
AggregationOutcome aggregate_by_medoid(const std::vector<Pcm>& pcms, Measure measure);

/// Priorities first: per-matrix weights, geometric mean across matrices,
/// renormalized. Throws EmptyInput / IncompleteMatrix.
WeightVector aggregate_priorities(const std::vector<Pcm>& pcms);

struct RankingComparison {
  bool equal = true;
  /// Alternative pairs (0-based, first < second) ordered differently by the
  /// two rankings, in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> reversals;
};

/// Rankings list alternatives (0-based) from best to worst. Throws
/// LengthMismatch, or InvalidArgument if either is not a permutation.
RankingComparison compare_rankings(std::span<const std::size_t> a,
                                   std::span<const std::size_t> b);

/// JSON with matrix, weights, ranking (1-based) and method tag.
void write_aggregation_json(std::ostream& os, const AggregationOutcome& outcome);

}  // namespace pcmclust
