// Shared matrices and generators for the test suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pcmclust/dissimilarity.hpp"
#include "pcmclust/pcm.hpp"

namespace fixtures {

using Grid = std::vector<std::vector<double>>;

inline pcmclust::Pcm pcm(const Grid& g, std::string label = {}) {
  pcmclust::ValidationOptions options;
  options.repair = true;
  return pcmclust::make_pcm(g, std::move(label), options);
}

// Three 3x3 matrices differing only in the (1,2) comparison: 2, 3 and 4.
inline pcmclust::Pcm lemma_a() { return pcm({{1, 2, 1}, {0.5, 1, 1}, {1, 1, 1}}, "A"); }
inline pcmclust::Pcm lemma_b() { return pcm({{1, 3, 1}, {1.0 / 3, 1, 1}, {1, 1, 1}}, "B"); }
inline pcmclust::Pcm lemma_c() { return pcm({{1, 4, 1}, {0.25, 1, 1}, {1, 1, 1}}, "C"); }

// Map task with four countries: the area-ratio matrix as printed (3 decimals).
inline const Grid kCountryAreas = {{1, 1.691, 0.282, 0.770},
                                   {0.591, 1, 0.167, 0.455},
                                   {3.544, 5.991, 1, 2.725},
                                   {1.300, 2.198, 0.367, 1}};

// Summer-house task, four-cluster centres under D1 and D3.
inline const Grid kHouseD1[4] = {
    {{1, 2.000, 7.000, 3.000}, {0.500, 1, 5.000, 2.000}, {0.143, 0.200, 1, 0.500},
     {0.333, 0.500, 2.000, 1}},
    {{1, 1.500, 0.500, 0.333}, {0.667, 1, 0.333, 0.333}, {2.000, 3.000, 1, 0.667},
     {3.000, 3.000, 1.500, 1}},
    {{1, 3.000, 5.000, 0.400}, {0.333, 1, 3.000, 0.143}, {0.200, 0.333, 1, 0.111},
     {2.500, 7.000, 9.000, 1}},
    {{1, 6.000, 3.000, 3.000}, {0.167, 1, 0.200, 0.200}, {0.333, 5.000, 1, 0.500},
     {0.333, 5.000, 2.000, 1}},
};

inline const Grid kHouseD3[4] = {
    kHouseD1[0],
    {{1, 1.500, 0.333, 0.200}, {0.667, 1, 0.333, 0.200}, {3.000, 3.000, 1, 0.500},
     {5.000, 5.000, 2.000, 1}},
    {{1, 4.000, 1.500, 2.000}, {0.250, 1, 0.333, 0.667}, {0.667, 3.000, 1, 3.000},
     {0.500, 1.500, 0.333, 1}},
    {{1, 5.000, 3.000, 1.000}, {0.200, 1, 0.500, 0.143}, {0.333, 2.000, 1, 0.200},
     {1.000, 7.000, 5.000, 1}},
};

// Summer-house task, one-cluster centres under D1 and D3.
inline const Grid kHouseOneD1 = {{1, 2.000, 3.000, 1.500},
                                 {0.500, 1, 2.000, 0.500},
                                 {0.333, 0.500, 1, 0.250},
                                 {0.667, 2.000, 4.000, 1}};
inline const Grid kHouseOneD3 = {{1, 2.000, 1.500, 1.000},
                                 {0.500, 1, 0.667, 0.667},
                                 {0.667, 1.500, 1, 0.667},
                                 {1.000, 1.500, 1.500, 1}};

// Eight-country map task, two-cluster centres under D3; the second carries
// the reversed (4,6) comparison.
inline const Grid kMapEight[2] = {
    {{1, 1.800, 0.769, 0.556, 1.800, 5.000, 1.100, 3.000},
     {0.556, 1, 0.455, 0.313, 1.100, 2.700, 0.909, 1.500},
     {1.300, 2.200, 1, 0.833, 3.000, 7.000, 1.800, 3.300},
     {1.800, 3.200, 1.200, 1, 5.000, 10.100, 2.200, 6.000},
     {0.556, 0.909, 0.333, 0.200, 1, 2.300, 0.625, 1.400},
     {0.200, 0.370, 0.143, 0.099, 0.435, 1, 0.250, 0.769},
     {0.909, 1.100, 0.556, 0.455, 1.600, 4.000, 1, 2.200},
     {0.333, 0.667, 0.303, 0.167, 0.714, 1.300, 0.455, 1}},
    {{1, 1.500, 0.500, 0.500, 3.000, 6.000, 1.200, 3.000},
     {0.667, 1, 0.500, 0.333, 1.500, 3.000, 0.667, 1.500},
     {2.000, 2.000, 1, 0.667, 5.000, 8.000, 1.500, 4.000},
     {2.000, 3.000, 1.500, 1, 4.500, 0.100, 2.000, 5.000},
     {0.333, 0.667, 0.200, 0.222, 1, 2.000, 0.667, 1.200},
     {0.167, 0.333, 0.125, 10.000, 0.500, 1, 0.286, 0.500},
     {0.833, 1.500, 0.667, 0.500, 1.500, 3.500, 1, 2.500},
     {0.333, 0.667, 0.250, 0.200, 0.833, 2.000, 0.400, 1}},
};

/// Entries drawn from the 1/9..9 scale, upper triangle independent.
inline pcmclust::Pcm random_pcm(std::mt19937_64& rng, std::size_t n, std::string label = {}) {
  std::uniform_int_distribution<int> value(1, 9);
  std::bernoulli_distribution invert(0.5);
  Grid g(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = value(rng);
      if (invert(rng)) v = 1.0 / v;
      g[i][j] = v;
      g[j][i] = 1.0 / v;
    }
  }
  return pcmclust::make_pcm(g, std::move(label));
}

/// Consistent matrix from `weights` with multiplicative log-normal noise of
/// spread `sigma` on every upper-triangle entry.
inline Grid noisy_grid(std::mt19937_64& rng, const std::vector<double>& weights, double sigma) {
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t n = weights.size();
  Grid g(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = weights[i] / weights[j] * std::exp(noise(rng));
      g[i][j] = v;
      g[j][i] = 1.0 / v;
    }
  }
  return g;
}

/// Random symmetric dissimilarity matrix with zero diagonal.
inline pcmclust::DissimilarityMatrix random_delta(std::mt19937_64& rng, std::size_t m,
                                                  bool integer_valued = false) {
  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::uniform_int_distribution<int> whole(0, 6);
  std::vector<double> v(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double x = integer_valued ? whole(rng) : real(rng);
      v[i * m + j] = x;
      v[j * m + i] = x;
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) labels.push_back("o" + std::to_string(i + 1));
  return pcmclust::DissimilarityMatrix(std::move(v), std::move(labels));
}

/// Lowest objective over all k-subsets, by brute force.
inline double brute_force_objective(const pcmclust::DissimilarityMatrix& d, std::size_t k) {
  const std::size_t m = d.size();
  double best = INFINITY;
  std::vector<bool> pick(m, false);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), true);
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double near = INFINITY;
      for (std::size_t j = 0; j < m; ++j)
        if (pick[j] && d(i, j) < near) near = d(i, j);
      total += near;
    }
    best = std::min(best, total);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace fixtures
