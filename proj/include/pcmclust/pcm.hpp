#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcmclust {

/// Square grid of optional entries as read from a file; `std::nullopt` marks a
/// missing comparison.
using RawGrid = std::vector<std::vector<std::optional<double>>>;

/// Tolerance on |a_ij * a_ji - 1| below which a pair counts as reciprocal.
inline constexpr double kReciprocityTolerance = 1e-9;

/// Mismatch below which the repair mode restores reciprocity instead of failing.
inline constexpr double kRepairTolerance = 1e-2;

struct ValidationOptions {
  /// Replace the smaller entry of a slightly non-reciprocal pair by the
  /// reciprocal of the larger one (printed matrices are rounded to a few
  /// decimals, so 7 and 0.143 do not multiply to 1).
  bool repair = false;
  double repair_tolerance = kRepairTolerance;
};

/**
 * A pairwise comparison matrix: positive, reciprocal, unit diagonal, with a
 * connected comparison graph. Missing entries are allowed and always come in
 * reciprocal pairs.
 *
 * Instances are only produced by `validate_pcm` (or the helpers built on it),
 * so every Pcm in the program satisfies the invariants above. Immutable.
 */
class Pcm {
 public:
  std::size_t order() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }

  bool has(std::size_t i, std::size_t j) const { return entries_[i * n_ + j].has_value(); }
  std::optional<double> at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  /// Entry (i, j). Precondition: the entry is present.
  double operator()(std::size_t i, std::size_t j) const { return *entries_[i * n_ + j]; }

  bool is_complete() const noexcept { return missing_pairs_ == 0; }
  std::size_t missing_pairs() const noexcept { return missing_pairs_; }

  RawGrid to_grid() const;

  /// Same matrix under another label.
  Pcm relabeled(std::string label) const;

  friend bool operator==(const Pcm&, const Pcm&) = default;

 private:
  friend Pcm validate_pcm(const RawGrid&, std::string, const ValidationOptions&,
                          std::vector<std::string>*);

  Pcm() = default;

  std::size_t n_ = 0;
  std::vector<std::optional<double>> entries_;
  std::string label_;
  std::size_t missing_pairs_ = 0;
};

/**
 * Validates a raw grid and builds a Pcm.
 *
 * Throws Error with NotSquare, BadDiagonal, NonPositiveEntry, NonReciprocal or
 * DisconnectedGraph. With `options.repair`, pairs whose product is off by less
 * than `repair_tolerance` (relative) are fixed and a message is appended to
 * `warnings` when it is non-null.
 */
Pcm validate_pcm(const RawGrid& raw, std::string label, const ValidationOptions& options = {},
                 std::vector<std::string>* warnings = nullptr);

/// Complete grid convenience overload.
Pcm make_pcm(const std::vector<std::vector<double>>& values, std::string label = {},
             const ValidationOptions& options = {});

/// Consistent matrix a_ij = w_i / w_j.
Pcm consistent_pcm(std::span<const double> weights, std::string label = {});

/// Positive weights summing to one.
class WeightVector {
 public:
  /// Normalizes `raw` to unit sum. Throws InvalidArgument unless every entry is
  /// positive and finite.
  static WeightVector normalized(std::vector<double> raw);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }

 private:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

/// Random index RI_n keyed by matrix order.
using RandomIndexTable = std::map<std::size_t, double>;

/// Saaty's RI values for n = 3..8.
const RandomIndexTable& default_random_index();

struct InconsistencyReport {
  double lambda_max = 0.0;
  double ci = 0.0;
  double cr = 0.0;
  double ri_used = 0.0;
};

/// |a_ij a_jk - a_ik| <= tol * a_ik for every triple. Throws IncompleteMatrix.
bool is_consistent(const Pcm& pcm, double tol);

/**
 * Perron root of a complete PCM by power iteration. Iterates are normalized to
 * unit sum; the run stops once the Collatz-Wielandt bracket
 * [min_i (Ax)_i/x_i, max_i (Ax)_i/x_i] is narrower than 1e-12 relative, which
 * bounds the error of the returned midpoint. Throws IncompleteMatrix and,
 * after 10 000 iterations, NoConvergence.
 */
double lambda_max(const Pcm& pcm);

/// CI = (lambda_max - n)/(n - 1) and CR = CI / RI_n. Order 2 matrices are
/// always consistent and get CR = 0 without a table lookup.
InconsistencyReport consistency_report(const Pcm& pcm,
                                       const RandomIndexTable& ri = default_random_index());

/// Row geometric means normalized to unit sum. Throws IncompleteMatrix.
WeightVector llsm_weights(const Pcm& pcm);

/// Alternatives (0-based) by descending weight; ties go to the lower index.
std::vector<std::size_t> ranking_from_weights(const WeightVector& w);

/// "1 > 4 > 2 > 3" style rendering with 1-based alternatives.
std::string format_ranking(std::span<const std::size_t> ranking);

}  // namespace pcmclust
