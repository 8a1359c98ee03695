#include "pcmclust/aggregation.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

#include "pcmclust/error.hpp"
#include "pcmclust/kmedoids.hpp"

namespace pcmclust {

namespace {

void require_same_order(const std::vector<Pcm>& pcms) {
  if (pcms.empty()) throw Error(Errc::EmptyInput, "no matrices to aggregate");
  for (const auto& p : pcms) {
    if (p.order() != pcms.front().order()) {
      throw Error(Errc::OrderMismatch, "matrix '" + p.label() + "' has order " +
                                           std::to_string(p.order()) + ", expected " +
                                           std::to_string(pcms.front().order()));
    }
  }
}

AggregationOutcome outcome_from(Pcm aggregate, std::string method) {
  auto weights = llsm_weights(aggregate);
  auto ranking = ranking_from_weights(weights);
  return AggregationOutcome{std::move(aggregate), std::move(weights), std::move(ranking),
                            std::move(method), std::nullopt, std::nullopt};
}

}  // namespace

AggregationOutcome aggregate_geometric(const std::vector<Pcm>& pcms) {
  require_same_order(pcms);
  const std::size_t n = pcms.front().order();
  RawGrid grid(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    grid[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double log_sum = 0.0;
      std::size_t count = 0;
      for (const auto& p : pcms) {
        if (!p.has(i, j)) continue;
        log_sum += std::log(p(i, j));
        ++count;
      }
      if (count == 0) {
        throw Error(Errc::IncompleteMatrix, "comparison (" + std::to_string(i + 1) + "," +
                                                std::to_string(j + 1) +
                                                ") is missing from every matrix");
      }
      const double g = std::exp(log_sum / static_cast<double>(count));
      grid[i][j] = g;
      grid[j][i] = 1.0 / g;
    }
  }
  return outcome_from(validate_pcm(grid, "geometric_mean"), "geometric_mean");
}

AggregationOutcome aggregate_by_medoid(const std::vector<Pcm>& pcms, Measure measure) {
  require_same_order(pcms);
  const std::string method = "medoid_" + std::string(to_string(measure));
  if (pcms.size() == 1) {
    auto out = outcome_from(pcms.front(), method);
    out.medoid = 0;
    out.objective = 0.0;
    return out;
  }
  const auto delta = build_delta(pcms, measure);
  const auto solution = solve_exact(KMedoidsProblem{delta, 1});
  const std::size_t centre = solution.medoids.front();
  auto out = outcome_from(pcms[centre], method);
  out.medoid = centre;
  out.objective = solution.objective;
  return out;
}

WeightVector aggregate_priorities(const std::vector<Pcm>& pcms) {
  require_same_order(pcms);
  const std::size_t n = pcms.front().order();
  std::vector<double> log_sum(n, 0.0);
  for (const auto& p : pcms) {
    const auto w = llsm_weights(p);
    for (std::size_t i = 0; i < n; ++i) log_sum[i] += std::log(w[i]);
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(log_sum[i] / static_cast<double>(pcms.size()));
  return WeightVector::normalized(std::move(g));
}

RankingComparison compare_rankings(std::span<const std::size_t> a,
                                   std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "rankings have lengths " + std::to_string(a.size()) +
                                          " and " + std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  auto positions = [n](std::span<const std::size_t> r) {
    std::vector<std::size_t> pos(n, n);
    for (std::size_t p = 0; p < n; ++p) {
      if (r[p] >= n || pos[r[p]] != n) {
        throw Error(Errc::InvalidArgument, "ranking is not a permutation");
      }
      pos[r[p]] = p;
    }
    return pos;
  };
  const auto pa = positions(a);
  const auto pb = positions(b);

  RankingComparison out;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if ((pa[x] < pa[y]) != (pb[x] < pb[y])) out.reversals.emplace_back(x, y);
    }
  }
  out.equal = out.reversals.empty();
  return out;
}

void write_aggregation_json(std::ostream& os, const AggregationOutcome& outcome) {
  using nlohmann::json;
  const std::size_t n = outcome.aggregate.order();
  json matrix = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(outcome.aggregate(i, j));
    matrix.push_back(std::move(row));
  }
  json ranking = json::array();
  for (std::size_t r : outcome.ranking) ranking.push_back(r + 1);
  json doc{{"method", outcome.method},
           {"label", outcome.aggregate.label()},
           {"matrix", std::move(matrix)},
           {"weights", outcome.weights.values()},
           {"ranking", std::move(ranking)}};
  if (outcome.objective) doc["objective"] = *outcome.objective;
  os << doc.dump(2) << '\n';
}

}  // namespace pcmclust
