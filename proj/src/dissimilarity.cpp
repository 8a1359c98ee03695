#include "pcmclust/dissimilarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcmclust/error.hpp"
#include "pcmclust/format.hpp"

namespace pcmclust {

bool is_metric(Measure m) noexcept {
  switch (m) {
    case Measure::D1:
    case Measure::D2:
    case Measure::D6:
    case Measure::D7:
      return true;
    case Measure::D3:
    case Measure::D4:
    case Measure::D5:
      return false;
  }
  return false;
}

std::string_view to_string(Measure m) noexcept {
  static constexpr std::array<std::string_view, 7> names{"D1", "D2", "D3", "D4",
                                                         "D5", "D6", "D7"};
  return names[static_cast<std::size_t>(m)];
}

Measure parse_measure(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'd' || text[0] == 'D') && text[1] >= '1' &&
      text[1] <= '7') {
    return kAllMeasures[static_cast<std::size_t>(text[1] - '1')];
  }
  throw Error(Errc::InvalidArgument,
              "unknown measure '" + std::string(text) + "' (expected d1..d7)");
}

double dissim(const Pcm& a, const Pcm& b, Measure measure) {
  const std::size_t n = a.order();
  if (b.order() != n) {
    throw Error(Errc::OrderMismatch, "matrices '" + a.label() + "' and '" + b.label() +
                                         "' have orders " + std::to_string(n) + " and " +
                                         std::to_string(b.order()));
  }

  double sum = 0.0;
  // Extremum accumulators start from the diagonal term a_ii b_ii - 1 = 0.
  double hi = 0.0;
  double lo = 0.0;
  std::size_t common = 0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!a.has(i, j) || !b.has(i, j)) continue;
      ++common;
      const double x = a(i, j) * b(j, i);
      const double y = a(j, i) * b(i, j);
      switch (measure) {
        case Measure::D1: {
          const double u = std::log(a(i, j)) - std::log(b(i, j));
          const double v = std::log(a(j, i)) - std::log(b(j, i));
          sum += u * u + v * v;
          break;
        }
        case Measure::D2:
          sum += std::abs(std::log(a(i, j)) - std::log(b(i, j))) +
                 std::abs(std::log(a(j, i)) - std::log(b(j, i)));
          break;
        case Measure::D3:
          sum += (x + y) - 2.0;
          break;
        case Measure::D4:
          sum += std::max(x, y) - 1.0;
          break;
        case Measure::D5:
        case Measure::D7:
          hi = std::max(hi, std::max(x, y) - 1.0);
          lo = std::min(lo, std::min(x, y) - 1.0);
          break;
        case Measure::D6:
          sum += std::min(x, y) - 1.0;
          break;
      }
    }
  }
  if (common == 0) {
    throw Error(Errc::NoCommonComparisons, "matrices '" + a.label() + "' and '" + b.label() +
                                               "' share no comparison");
  }

  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double d = 0.0;
  switch (measure) {
    case Measure::D1: d = std::sqrt(sum); break;
    case Measure::D2: d = sum; break;
    case Measure::D3: d = sum; break;
    case Measure::D4: d = sum / pairs; break;
    case Measure::D5: d = hi; break;
    case Measure::D6: d = -sum / pairs; break;
    case Measure::D7: d = -lo; break;
  }
  // x + y >= 2 and max >= 1 hold exactly in real arithmetic; clip rounding noise.
  return std::max(d, 0.0);
}

double compatibility_index(const Pcm& a, const Pcm& b) {
  if (!a.is_complete() || !b.is_complete()) {
    throw Error(Errc::IncompleteMatrix, "compatibility index needs complete matrices");
  }
  if (a.order() != b.order()) throw Error(Errc::OrderMismatch, "matrix orders differ");
  const std::size_t n = a.order();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * b(j, i);
  return s / static_cast<double>(n * n);
}

DissimilarityMatrix::DissimilarityMatrix(std::vector<double> values,
                                         std::vector<std::string> labels,
                                         std::optional<Measure> measure)
    : m_(labels.size()),
      values_(std::move(values)),
      labels_(std::move(labels)),
      measure_(measure) {
  if (m_ == 0 || values_.size() != m_ * m_) {
    throw Error(Errc::InvalidArgument, "dissimilarity matrix must be square with one label per row");
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw Error(Errc::InvalidArgument, "dissimilarity matrix diagonal must be zero");
    }
    for (std::size_t j = i + 1; j < m_; ++j) {
      const double u = (*this)(i, j);
      const double v = (*this)(j, i);
      if (!std::isfinite(u) || u < 0.0 || !std::isfinite(v) || v < 0.0) {
        throw Error(Errc::InvalidArgument, "dissimilarities must be finite and non-negative");
      }
      if (std::abs(u - v) > 1e-12 * std::max(1.0, std::abs(u))) {
        throw Error(Errc::InvalidArgument, "dissimilarity matrix must be symmetric");
      }
    }
  }
}

DissimilarityMatrix DissimilarityMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  std::vector<double> v;
  v.reserve(m * m);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) throw Error(Errc::InvalidArgument, "dissimilarity rows must be square");
    v.insert(v.end(), rows[i].begin(), rows[i].end());
    labels.push_back(std::to_string(i + 1));
  }
  return DissimilarityMatrix(std::move(v), std::move(labels));
}

DissimilarityMatrix DissimilarityMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != m_) throw Error(Errc::InvalidArgument, "permutation has wrong length");
  std::vector<double> v(m_ * m_);
  std::vector<std::string> labels(m_);
  for (std::size_t r = 0; r < m_; ++r) {
    labels[r] = labels_[perm[r]];
    for (std::size_t c = 0; c < m_; ++c) v[r * m_ + c] = (*this)(perm[r], perm[c]);
  }
  return DissimilarityMatrix(std::move(v), std::move(labels), measure_);
}

DissimilarityMatrix build_delta(const std::vector<Pcm>& pcms, Measure measure) {
  const std::size_t m = pcms.size();
  if (m < 2) throw Error(Errc::EmptyInput, "at least two matrices are needed");
  std::vector<double> v(m * m, 0.0);
  std::vector<std::string> labels;
  labels.reserve(m);
  for (const auto& p : pcms) labels.push_back(p.label());

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d = 0.0;
      try {
        d = dissim(pcms[i], pcms[j], measure);
      } catch (const Error& e) {
        throw Error(e.code(), "pair (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                  "): " + e.what());
      }
      v[i * m + j] = d;
      v[j * m + i] = d;
    }
  }
  return DissimilarityMatrix(std::move(v), std::move(labels), measure);
}

std::vector<TriangleViolation> check_triangle(const DissimilarityMatrix& delta, double tol) {
  std::vector<TriangleViolation> out;
  const std::size_t m = delta.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      const double direct = delta(i, k);
      const double slack = tol * std::max(1.0, direct);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i || j == k) continue;
        const double excess = direct - (delta(i, j) + delta(j, k));
        if (excess > slack) out.push_back({i, j, k, excess});
      }
    }
  }
  return out;
}

void write_delta_tsv(std::ostream& os, const DissimilarityMatrix& delta) {
  const std::size_t m = delta.size();
  os << "label";
  for (const auto& l : delta.labels()) os << '\t' << l;
  os << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    os << delta.labels()[i];
    for (std::size_t j = 0; j < m; ++j) os << '\t' << format_exact(delta(i, j));
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

}  // namespace

DissimilarityMatrix read_delta_tsv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::ParseError, "line 1: empty dissimilarity file");
  auto header = split_tabs(line);
  if (header.size() < 2) throw Error(Errc::ParseError, "line 1: header needs labels");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const std::size_t m = labels.size();
  std::vector<double> v;
  v.reserve(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::string lineno = "line " + std::to_string(r + 2) + ": ";
    if (!std::getline(is, line)) throw Error(Errc::ParseError, lineno + "missing row");
    auto cells = split_tabs(line);
    if (cells.size() != m + 1) throw Error(Errc::ParseError, lineno + "wrong number of cells");
    if (cells[0] != labels[r]) throw Error(Errc::ParseError, lineno + "row label mismatch");
    for (std::size_t c = 1; c <= m; ++c) {
      const auto x = parse_number(cells[c]);
      if (!x) throw Error(Errc::ParseError, lineno + "bad number '" + cells[c] + "'");
      v.push_back(*x);
    }
  }
  try {
    return DissimilarityMatrix(std::move(v), std::move(labels));
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace pcmclust
