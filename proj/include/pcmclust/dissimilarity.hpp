#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcmclust/pcm.hpp"

namespace pcmclust {

/**
 * Dissimilarity measures between two PCMs of the same order.
 *
 *  - D1: sqrt(sum_ij (ln a_ij - ln b_ij)^2)
 *  - D2: sum_ij |ln a_ij - ln b_ij|
 *  - D3: sum_ij (a_ij b_ji - 1), the compatibility index shifted to vanish at A = B
 *  - D4: 2/(n(n-1)) sum_{i<j} (max{a_ij b_ji, a_ji b_ij} - 1)
 *  - D5: max_ij (a_ij b_ji - 1)
 *  - D6: -2/(n(n-1)) sum_{i<j} (min{a_ij b_ji, a_ji b_ij} - 1)
 *  - D7: -min_ij (a_ij b_ji - 1)
 *
 * D1, D2, D6 and D7 satisfy the triangle inequality; D3, D4 and D5 do not.
 */
enum class Measure { D1, D2, D3, D4, D5, D6, D7 };

inline constexpr std::array<Measure, 7> kAllMeasures{Measure::D1, Measure::D2, Measure::D3,
                                                     Measure::D4, Measure::D5, Measure::D6,
                                                     Measure::D7};

bool is_metric(Measure m) noexcept;
std::string_view to_string(Measure m) noexcept;

/// Accepts "d1".."d7" in either case. Throws InvalidArgument.
Measure parse_measure(std::string_view text);

/**
 * Dissimilarity of two PCMs of equal order.
 *
 * Sums and extrema run over the comparisons present in both matrices; a pair
 * missing from either one contributes nothing, while the order-based factor of
 * D4/D6 stays fixed. Every measure is evaluated pair by pair over i < j so the
 * result is bitwise symmetric in its arguments.
 *
 * Throws OrderMismatch or NoCommonComparisons.
 */
double dissim(const Pcm& a, const Pcm& b, Measure measure);

/// Saaty's compatibility index (1/n^2) sum_ij a_ij b_ji of complete matrices (>= 1).
double compatibility_index(const Pcm& a, const Pcm& b);

/// Symmetric m x m matrix of pairwise dissimilarities with a zero diagonal.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix(std::vector<double> values, std::vector<std::string> labels,
                      std::optional<Measure> measure = std::nullopt);

  /// Unlabelled matrix ("1".."m") from nested rows; used for plain numeric input.
  static DissimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<Measure> measure() const noexcept { return measure_; }

  /// Entrywise transform (e.g. squaring for dendrogram display).
  template <typename F>
  DissimilarityMatrix transformed(F&& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
    return DissimilarityMatrix(std::move(v), labels_, measure_);
  }

  /// Rows and columns reordered so that new index r is old index perm[r].
  DissimilarityMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  std::size_t m_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
  std::optional<Measure> measure_;
};

/// All pairwise dissimilarities. Requires m >= 2 matrices of one order; errors
/// from `dissim` are rethrown naming the offending pair.
DissimilarityMatrix build_delta(const std::vector<Pcm>& pcms, Measure measure);

struct TriangleViolation {
  std::size_t from;  // i
  std::size_t via;   // j
  std::size_t to;    // k
  double excess;     // delta_ik - delta_ij - delta_jk
};

/**
 * Triples with delta_ik > delta_ij + delta_jk + tol * max(1, delta_ik), for
 * i < k and j distinct from both. The scaled slack absorbs summation rounding
 * in large dissimilarities.
 */
std::vector<TriangleViolation> check_triangle(const DissimilarityMatrix& delta,
                                              double tol = 1e-12);

/// TSV with a header row of labels and 17 significant digits per value.
void write_delta_tsv(std::ostream& os, const DissimilarityMatrix& delta);

/// Reads the format produced by write_delta_tsv. Throws ParseError.
DissimilarityMatrix read_delta_tsv(std::istream& is);

}  // namespace pcmclust
