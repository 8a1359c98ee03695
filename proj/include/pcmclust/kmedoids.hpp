#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string_view>
#include <vector>

#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/pcm.hpp"

namespace pcmclust {

/**
 * The k-medoids program
 *
 *   min  sum_ij delta_ij x_ij
 *   s.t. sum_j x_ij = 1          (every object in exactly one cluster)
 *        x_ij <= y_j             (only medoids receive objects)
 *        sum_j y_j = k
 *        y_j = 0 for j in forbidden_medoids
 *        x >= 0, y binary.
 *
 * The forbidden set expresses any restriction that excludes objects from
 * serving as centres, for example an inconsistency cap.
 */
struct KMedoidsProblem {
  const DissimilarityMatrix& delta;
  std::size_t k;
  std::set<std::size_t> forbidden_medoids{};

  /// Throws InvalidArgument for bad indices or k = 0, Infeasible when fewer
  /// than k objects may serve as medoids.
  void validate() const;
};

enum class SolverKind { Exact, Heuristic };

std::string_view to_string(SolverKind kind) noexcept;

struct ClusteringSolution {
  std::vector<std::size_t> medoids;     // ascending object indices
  std::vector<std::size_t> assignment;  // object -> medoid object index
  double objective = 0.0;
  bool optimal = false;
  SolverKind solver = SolverKind::Exact;

  std::size_t k() const noexcept { return medoids.size(); }
  /// Position of object i's medoid within `medoids`.
  std::size_t cluster_of(std::size_t i) const;
  std::vector<std::size_t> members(std::size_t cluster) const;
  std::vector<std::size_t> cluster_sizes() const;
};

/// Nearest-medoid assignment (ties to the lowest medoid index) and its
/// objective, summed over objects in index order.
ClusteringSolution assign_to_medoids(const DissimilarityMatrix& delta,
                                     std::vector<std::size_t> medoids);

struct ExactOptions {
  /// Subsets are enumerated outright when C(eligible, k) does not exceed this.
  std::uint64_t enumeration_limit = 1'000'000;
  /// Branch-and-bound node cap; exceeding it raises SearchBudgetExceeded.
  std::uint64_t node_limit = 10'000'000;
};

/**
 * Globally optimal medoid set. With the medoids fixed the best assignment is
 * nearest-medoid, so the search runs over medoid subsets only: plain
 * enumeration for small instances, otherwise a depth-first branch and bound
 * whose bound lets every object reach its nearest chosen-or-still-available
 * candidate. Among optimal sets the lexicographically smallest is returned.
 */
ClusteringSolution solve_exact(const KMedoidsProblem& problem, const ExactOptions& options = {});

/**
 * BUILD + SWAP local search, followed by `restarts` further SWAP runs from
 * random medoid sets; the best local optimum wins (the BUILD start on ties).
 * `seed` drives the restarts and the candidate scan order, so results are
 * deterministic per seed.
 */
ClusteringSolution solve_pam(const KMedoidsProblem& problem, std::uint64_t seed = 0,
                             std::size_t restarts = 4);

/// Indices of matrices whose consistency ratio exceeds `threshold`, for use as
/// forbidden medoids. Throws IncompleteMatrix.
std::set<std::size_t> eligible_medoids_by_cr(const std::vector<Pcm>& pcms, double threshold,
                                             const RandomIndexTable& ri = default_random_index());

/// Medoids whose cluster has at most `max_size` members.
std::vector<std::size_t> detect_outliers(const ClusteringSolution& solution,
                                         std::size_t max_size = 1);

/// JSON with medoid labels, per-object assignment, objective, solver and optimality flag.
void write_solution_json(std::ostream& os, const ClusteringSolution& solution,
                         const DissimilarityMatrix& delta);

}  // namespace pcmclust
