#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/kmedoids.hpp"

namespace pcmclust {

struct EmbeddingResult {
  std::size_t dim = 2;
  /// Row-major m x dim coordinates, centred at the origin.
  std::vector<double> coords;
  /// Kruskal stress-1 of the final configuration.
  double stress = 0.0;
  /// Stress-1 of the classical scaling start.
  double classical_stress = 0.0;
  /// Eigenvalues of the double-centred matrix, descending. Negative values
  /// measure how far the input is from Euclidean.
  std::vector<double> eigenvalue_spectrum;
  /// Stress-1 before the first and after every SMACOF iteration.
  std::vector<double> stress_history;
  std::size_t iterations = 0;

  double coord(std::size_t i, std::size_t axis) const { return coords[i * dim + axis]; }
};

struct MdsOptions {
  std::size_t dim = 2;
  std::size_t max_iterations = 500;
  double relative_tolerance = 1e-8;
  /// Only used when classical scaling yields a degenerate start.
  std::uint64_t seed = 0;
};

/**
 * Classical scaling (double centring, top `dim` eigenpairs, negative
 * eigenvalues truncated) refined by SMACOF stress majorization until the
 * relative stress change drops below the tolerance. An all-zero input gives
 * all points at the origin. Requires m >= dim + 1 (InvalidArgument).
 */
EmbeddingResult embed(const DissimilarityMatrix& delta, const MdsOptions& options = {});

/// Kruskal stress-1 of a configuration; 0 when all dissimilarities vanish.
double kruskal_stress(const DissimilarityMatrix& delta, const std::vector<double>& coords,
                      std::size_t dim);

/// TSV columns: label, x, y, cluster, cr. Cluster ids are 1-based; missing
/// solution or CR values are written as NA.
void write_mds_tsv(std::ostream& os, const EmbeddingResult& embedding,
                   const DissimilarityMatrix& delta, const ClusteringSolution* solution,
                   const std::vector<std::optional<double>>& cr);

}  // namespace pcmclust
