#include "pcmclust/kmedoids.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"

#include "pcmclust/error.hpp"

namespace pcmclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> eligible_objects(const KMedoidsProblem& p) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < p.delta.size(); ++j)
    if (!p.forbidden_medoids.contains(j)) out.push_back(j);
  return out;
}

/// C(n, r) saturated at `cap + 1`.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / (n - r + i)) return cap + 1;
    c = c * (n - r + i) / i;
    if (c > cap) return cap + 1;
  }
  return c;
}

/// Depth-first search over medoid subsets in lexicographic order.
class SubsetSearch {
 public:
  SubsetSearch(const DissimilarityMatrix& delta, std::vector<std::size_t> eligible,
               std::size_t k, bool bounded, std::uint64_t node_limit)
      : delta_(delta),
        m_(delta.size()),
        eligible_(std::move(eligible)),
        k_(k),
        bounded_(bounded),
        node_limit_(node_limit),
        near_(k + 1, std::vector<double>(m_, kInf)) {
    if (bounded_) {
      const std::size_t e = eligible_.size();
      suffix_min_.assign((e + 1) * m_, kInf);
      for (std::size_t p = e; p-- > 0;) {
        for (std::size_t i = 0; i < m_; ++i) {
          suffix_min_[p * m_ + i] =
              std::min(suffix_min_[(p + 1) * m_ + i], delta_(i, eligible_[p]));
        }
      }
    }
  }

  /// Starts from an incumbent (typically a heuristic solution) so that the
  /// bound prunes early; ties with it are still resolved lexicographically.
  void set_incumbent(double cost) { best_ = cost; }

  std::vector<std::size_t> run() {
    chosen_.clear();
    dfs(0, 0);
    return best_set_;
  }

 private:
  void dfs(std::size_t pos, std::size_t count) {
    if (bounded_ && ++nodes_ > node_limit_) {
      throw Error(Errc::SearchBudgetExceeded,
                  "branch and bound exceeded " + std::to_string(node_limit_) + " nodes");
    }
    const auto& near = near_[count];
    if (count == k_) {
      double cost = 0.0;
      for (std::size_t i = 0; i < m_; ++i) cost += near[i];
      if (cost < best_ || (!tight_ && cost == best_)) {
        best_ = cost;
        best_set_ = chosen_;
        tight_ = true;
      }
      return;
    }
    if (eligible_.size() - pos < k_ - count) return;

    if (bounded_) {
      double bound = 0.0;
      const double* rest = &suffix_min_[pos * m_];
      for (std::size_t i = 0; i < m_; ++i) bound += std::min(near[i], rest[i]);
      if (bound > best_ || (tight_ && bound >= best_)) return;
    }

    const std::size_t j = eligible_[pos];
    auto& next = near_[count + 1];
    for (std::size_t i = 0; i < m_; ++i) next[i] = std::min(near[i], delta_(i, j));
    chosen_.push_back(j);
    dfs(pos + 1, count + 1);
    chosen_.pop_back();

    dfs(pos + 1, count);
  }

  const DissimilarityMatrix& delta_;
  std::size_t m_;
  std::vector<std::size_t> eligible_;
  std::size_t k_;
  bool bounded_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<double>> near_;
  std::vector<double> suffix_min_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_set_;
  double best_ = kInf;
  bool tight_ = false;
};

}  // namespace

void KMedoidsProblem::validate() const {
  const std::size_t m = delta.size();
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be at least 1");
  for (std::size_t j : forbidden_medoids) {
    if (j >= m) {
      throw Error(Errc::InvalidArgument, "forbidden medoid index " + std::to_string(j) +
                                             " out of range");
    }
  }
  const std::size_t eligible = m - forbidden_medoids.size();
  if (k > eligible) {
    throw Error(Errc::Infeasible, "k = " + std::to_string(k) + " exceeds the " +
                                      std::to_string(eligible) + " eligible medoid(s)");
  }
}

std::string_view to_string(SolverKind kind) noexcept {
  return kind == SolverKind::Exact ? "exact" : "heuristic";
}

std::size_t ClusteringSolution::cluster_of(std::size_t i) const {
  const auto it = std::lower_bound(medoids.begin(), medoids.end(), assignment[i]);
  return static_cast<std::size_t>(it - medoids.begin());
}

std::vector<std::size_t> ClusteringSolution::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == medoids[cluster]) out.push_back(i);
  return out;
}

std::vector<std::size_t> ClusteringSolution::cluster_sizes() const {
  std::vector<std::size_t> sizes(medoids.size(), 0);
  for (std::size_t i = 0; i < assignment.size(); ++i) ++sizes[cluster_of(i)];
  return sizes;
}

ClusteringSolution assign_to_medoids(const DissimilarityMatrix& delta,
                                     std::vector<std::size_t> medoids) {
  std::sort(medoids.begin(), medoids.end());
  ClusteringSolution s;
  s.assignment.resize(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (std::binary_search(medoids.begin(), medoids.end(), i)) {
      s.assignment[i] = i;
      continue;
    }
    std::size_t best = medoids.front();
    for (std::size_t j : medoids)
      if (delta(i, j) < delta(i, best)) best = j;
    s.assignment[i] = best;
  }
  for (std::size_t i = 0; i < delta.size(); ++i) s.objective += delta(i, s.assignment[i]);
  s.medoids = std::move(medoids);
  return s;
}

ClusteringSolution solve_exact(const KMedoidsProblem& problem, const ExactOptions& options) {
  problem.validate();
  auto eligible = eligible_objects(problem);
  const bool enumerate =
      binomial_capped(eligible.size(), problem.k, options.enumeration_limit) <=
      options.enumeration_limit;

  SubsetSearch search(problem.delta, std::move(eligible), problem.k, !enumerate,
                      options.node_limit);
  if (!enumerate) search.set_incumbent(solve_pam(problem, 0).objective);

  auto solution = assign_to_medoids(problem.delta, search.run());
  solution.optimal = true;
  solution.solver = SolverKind::Exact;
  return solution;
}

namespace {

std::vector<std::size_t> pam_build(const DissimilarityMatrix& delta, std::size_t k,
                                   const std::vector<std::size_t>& eligible) {
  const std::size_t m = delta.size();
  std::vector<std::size_t> medoids;
  std::vector<bool> is_medoid(m, false);
  std::vector<double> near(m, kInf);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pick = m;
    double best_cost = kInf;
    for (std::size_t c : eligible) {
      if (is_medoid[c]) continue;
      double cost = 0.0;
      for (std::size_t i = 0; i < m; ++i) cost += std::min(near[i], delta(i, c));
      if (cost < best_cost) {
        best_cost = cost;
        pick = c;
      }
    }
    medoids.push_back(pick);
    is_medoid[pick] = true;
    for (std::size_t i = 0; i < m; ++i) near[i] = std::min(near[i], delta(i, pick));
  }
  return medoids;
}

/// Best-improvement swaps until no exchange of a medoid with a non-medoid
/// lowers the objective. `order` is the candidate scan order.
std::vector<std::size_t> pam_swap(const DissimilarityMatrix& delta,
                                  std::vector<std::size_t> medoids,
                                  const std::vector<std::size_t>& order) {
  const std::size_t m = delta.size();
  std::vector<bool> is_medoid(m, false);
  for (std::size_t j : medoids) is_medoid[j] = true;

  std::vector<double> first(m), second(m);
  std::vector<std::size_t> owner(m);
  auto refresh = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      first[i] = kInf;
      second[i] = kInf;
      for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
        const double d = delta(i, medoids[slot]);
        if (d < first[i]) {
          second[i] = first[i];
          first[i] = d;
          owner[i] = slot;
        } else if (d < second[i]) {
          second[i] = d;
        }
      }
    }
  };

  refresh();
  double cost = std::accumulate(first.begin(), first.end(), 0.0);
  for (;;) {
    double best_delta = 0.0;
    std::size_t best_slot = 0;
    std::size_t best_candidate = m;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      for (std::size_t h : order) {
        if (is_medoid[h]) continue;
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double keep = owner[i] == slot ? second[i] : first[i];
          change += std::min(keep, delta(i, h)) - first[i];
        }
        if (change < best_delta) {
          best_delta = change;
          best_slot = slot;
          best_candidate = h;
        }
      }
    }
    if (best_candidate == m || best_delta >= -1e-12 * std::max(1.0, cost)) break;
    is_medoid[medoids[best_slot]] = false;
    medoids[best_slot] = best_candidate;
    is_medoid[best_candidate] = true;
    refresh();
    cost = std::accumulate(first.begin(), first.end(), 0.0);
  }
  return medoids;
}

}  // namespace

ClusteringSolution solve_pam(const KMedoidsProblem& problem, std::uint64_t seed,
                             std::size_t restarts) {
  problem.validate();
  const auto& delta = problem.delta;
  const auto eligible = eligible_objects(problem);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order = eligible;
  std::shuffle(order.begin(), order.end(), rng);

  auto best = assign_to_medoids(delta, pam_swap(delta, pam_build(delta, problem.k, eligible), order));
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<std::size_t> start;
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(start), problem.k, rng);
    auto candidate = assign_to_medoids(delta, pam_swap(delta, std::move(start), order));
    if (candidate.objective < best.objective) best = std::move(candidate);
  }
  best.optimal = false;
  best.solver = SolverKind::Heuristic;
  return best;
}

std::set<std::size_t> eligible_medoids_by_cr(const std::vector<Pcm>& pcms, double threshold,
                                             const RandomIndexTable& ri) {
  std::set<std::size_t> forbidden;
  for (std::size_t i = 0; i < pcms.size(); ++i)
    if (consistency_report(pcms[i], ri).cr > threshold) forbidden.insert(i);
  return forbidden;
}

std::vector<std::size_t> detect_outliers(const ClusteringSolution& solution,
                                         std::size_t max_size) {
  std::vector<std::size_t> out;
  const auto sizes = solution.cluster_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] <= max_size) out.push_back(solution.medoids[c]);
  return out;
}

void write_solution_json(std::ostream& os, const ClusteringSolution& solution,
                         const DissimilarityMatrix& delta) {
  using nlohmann::json;
  const auto& labels = delta.labels();
  const auto sizes = solution.cluster_sizes();
  json medoids = json::array();
  for (std::size_t c = 0; c < solution.medoids.size(); ++c) {
    medoids.push_back({{"cluster", c + 1},
                       {"label", labels[solution.medoids[c]]},
                       {"size", sizes[c]}});
  }
  json assignment = json::array();
  for (std::size_t i = 0; i < solution.assignment.size(); ++i) {
    assignment.push_back({{"label", labels[i]},
                          {"cluster", solution.cluster_of(i) + 1},
                          {"medoid", labels[solution.assignment[i]]},
                          {"dissimilarity", delta(i, solution.assignment[i])}});
  }
  json doc{{"k", solution.k()},
           {"objective", solution.objective},
           {"solver", to_string(solution.solver)},
           {"optimal", solution.optimal},
           {"medoids", std::move(medoids)},
           {"assignment", std::move(assignment)}};
  if (const auto m = delta.measure()) doc["measure"] = to_string(*m);
  os << doc.dump(2) << '\n';
}

}  // namespace pcmclust
