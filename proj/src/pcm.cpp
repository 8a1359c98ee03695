#include "pcmclust/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pcmclust/error.hpp"

namespace pcmclust {

namespace {

std::string where(const std::string& label, std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "matrix '" << label << "' entry (" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

void require_complete(const Pcm& pcm) {
  if (!pcm.is_complete()) {
    throw Error(Errc::IncompleteMatrix,
                "matrix '" + pcm.label() + "' has " + std::to_string(pcm.missing_pairs()) +
                    " missing comparison(s)");
  }
}

bool graph_connected(std::size_t n, const std::vector<std::optional<double>>& e) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u = 0; u < n; ++u) {
      if (!seen[u] && e[v * n + u].has_value()) {
        seen[u] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

}  // namespace

RawGrid Pcm::to_grid() const {
  RawGrid g(n_, std::vector<std::optional<double>>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) g[i][j] = entries_[i * n_ + j];
  return g;
}

Pcm Pcm::relabeled(std::string label) const {
  Pcm copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

Pcm validate_pcm(const RawGrid& raw, std::string label, const ValidationOptions& options,
                 std::vector<std::string>* warnings) {
  const std::size_t n = raw.size();
  if (n < 2) {
    throw Error(Errc::NotSquare, "matrix '" + label + "' must have order at least 2");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) {
      throw Error(Errc::NotSquare, "matrix '" + label + "' row " + std::to_string(i + 1) +
                                       " has " + std::to_string(raw[i].size()) +
                                       " entries, expected " + std::to_string(n));
    }
  }

  Pcm pcm;
  pcm.n_ = n;
  pcm.entries_.assign(n * n, std::nullopt);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = raw[i][i];
    if (!d || std::abs(*d - 1.0) > kReciprocityTolerance) {
      throw Error(Errc::BadDiagonal, where(label, i, i) + " must be 1");
    }
    pcm.entries_[i * n + i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !raw[i][j]) continue;
      const double v = *raw[i][j];
      if (!std::isfinite(v) || v <= 0.0) {
        throw Error(Errc::NonPositiveEntry, where(label, i, j) + " must be positive and finite");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& upper = raw[i][j];
      const auto& lower = raw[j][i];
      if (upper.has_value() != lower.has_value()) {
        throw Error(Errc::NonReciprocal,
                    where(label, i, j) + " and its mirror must be both present or both missing");
      }
      if (!upper) {
        ++pcm.missing_pairs_;
        continue;
      }
      double a = *upper;
      double b = *lower;
      const double mismatch = std::abs(a * b - 1.0);
      if (mismatch > kReciprocityTolerance) {
        if (!options.repair || mismatch >= options.repair_tolerance) {
          std::ostringstream os;
          os << where(label, i, j) << " is not reciprocal: " << a << " * " << b << " = " << a * b;
          throw Error(Errc::NonReciprocal, os.str());
        }
        // The larger entry is the one elicited on the 1..9 scale.
        if (a >= b) {
          b = 1.0 / a;
        } else {
          a = 1.0 / b;
        }
        if (warnings != nullptr) {
          std::ostringstream os;
          os.precision(17);
          os << where(label, i, j) << ": repaired reciprocal pair (" << *upper << ", " << *lower
             << ") -> (" << a << ", " << b << ")";
          warnings->push_back(os.str());
        }
      }
      pcm.entries_[i * n + j] = a;
      pcm.entries_[j * n + i] = b;
    }
  }

  if (!graph_connected(n, pcm.entries_)) {
    throw Error(Errc::DisconnectedGraph,
                "matrix '" + label + "' has a disconnected comparison graph");
  }
  pcm.label_ = std::move(label);
  return pcm;
}

Pcm make_pcm(const std::vector<std::vector<double>>& values, std::string label,
             const ValidationOptions& options) {
  RawGrid raw;
  raw.reserve(values.size());
  for (const auto& row : values) raw.emplace_back(row.begin(), row.end());
  return validate_pcm(raw, std::move(label), options);
}

Pcm consistent_pcm(std::span<const double> weights, std::string label) {
  const std::size_t n = weights.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      v[i][j] = weights[i] / weights[j];
      v[j][i] = 1.0 / v[i][j];
    }
  }
  return make_pcm(v, std::move(label));
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
  if (raw.empty()) throw Error(Errc::InvalidArgument, "weight vector is empty");
  double sum = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw Error(Errc::InvalidArgument, "weights must be positive and finite");
    }
    sum += x;
  }
  for (double& x : raw) x /= sum;
  return WeightVector(std::move(raw));
}

const RandomIndexTable& default_random_index() {
  static const RandomIndexTable table{{3, 0.58}, {4, 0.90}, {5, 1.12},
                                      {6, 1.24}, {7, 1.32}, {8, 1.41}};
  return table;
}

bool is_consistent(const Pcm& pcm, double tol) {
  require_complete(pcm);
  const std::size_t n = pcm.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (std::abs(pcm(i, j) * pcm(j, k) - pcm(i, k)) > tol * pcm(i, k)) return false;
  return true;
}

double lambda_max(const Pcm& pcm) {
  require_complete(pcm);
  constexpr int kMaxIterations = 10'000;
  constexpr double kBracketTolerance = 1e-12;

  const std::size_t n = pcm.order();
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  for (int it = 0; it < kMaxIterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += pcm(i, j) * x[j];
      y[i] = s;
      sum += s;
      lo = std::min(lo, s / x[i]);
      hi = std::max(hi, s / x[i]);
    }
    if (hi - lo <= kBracketTolerance * hi) return 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / sum;
  }
  throw Error(Errc::NoConvergence,
              "power iteration for matrix '" + pcm.label() + "' did not converge");
}

InconsistencyReport consistency_report(const Pcm& pcm, const RandomIndexTable& ri) {
  InconsistencyReport r;
  r.lambda_max = lambda_max(pcm);
  const auto n = static_cast<double>(pcm.order());
  r.ci = (r.lambda_max - n) / (n - 1.0);
  if (pcm.order() == 2) return r;

  const auto it = ri.find(pcm.order());
  if (it == ri.end() || !(it->second > 0.0)) {
    throw Error(Errc::MissingRandomIndex,
                "no random index configured for order " + std::to_string(pcm.order()));
  }
  r.ri_used = it->second;
  r.cr = r.ci / r.ri_used;
  return r;
}

WeightVector llsm_weights(const Pcm& pcm) {
  require_complete(pcm);
  const std::size_t n = pcm.order();
  std::vector<double> log_means(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::log(pcm(i, j));
    log_means[i] = s / static_cast<double>(n);
  }
  // Shift before exponentiating so extreme matrices cannot overflow.
  const double top = *std::max_element(log_means.begin(), log_means.end());
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(log_means[i] - top);
  return WeightVector::normalized(std::move(g));
}

std::vector<std::size_t> ranking_from_weights(const WeightVector& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

std::string format_ranking(std::span<const std::size_t> ranking) {
  std::string out;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (i > 0) out += " > ";
    out += std::to_string(ranking[i] + 1);
  }
  return out;
}

}  // namespace pcmclust
