#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "pcmclust/diagnostics.hpp"
#include "pcmclust/error.hpp"

using namespace pcmclust;

namespace {

DissimilarityMatrix lemma_delta() {
  return build_delta({fixtures::lemma_a(), fixtures::lemma_b(), fixtures::lemma_c()},
                     Measure::D3);
}

}  // namespace

TEST_CASE("elbow series") {
  const auto series = elbow(lemma_delta(), 3);
  REQUIRE(series.points.size() == 3);
  CHECK(std::abs(series.points[0].objective - 0.25) < 1e-12);
  CHECK(std::abs(series.points[1].objective - 1.0 / 12) < 1e-12);
  CHECK(series.points[2].objective == 0.0);
  for (const auto& p : series.points) CHECK(p.optimal);

  const DissimilarityMatrix zero(std::vector<double>(25, 0.0), {"a", "b", "c", "d", "e"});
  for (const auto& p : elbow(zero, 5).points) CHECK(p.objective == 0.0);

  std::mt19937_64 rng(10);
  const auto d = fixtures::random_delta(rng, 10);
  const auto s = elbow(d, 10);
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    CHECK(s.points[i].objective <= s.points[i - 1].objective);
  }
  CHECK(s.points.back().objective == 0.0);

  CHECK_THROWS_AS(elbow(d, 11), Error);
  CHECK_THROWS_AS(elbow(d, 0), Error);

  std::stringstream ss;
  write_elbow_tsv(ss, series, {std::nullopt, 0.5});
  std::string header, first, second;
  std::getline(ss, header);
  std::getline(ss, first);
  std::getline(ss, second);
  CHECK(header == "k\tobjective\toptimal\tmean_silhouette");
  CHECK(first.substr(first.rfind('\t') + 1) == "NA");
  CHECK(second.substr(second.rfind('\t') + 1) == "0.5");
}

TEST_CASE("silhouette of two separated groups") {
  const auto d = DissimilarityMatrix::from_rows(
      {{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
  const auto r = silhouette(d, assign_to_medoids(d, {0, 2}));
  for (double s : r.per_object) CHECK(s == 1.0);
  CHECK(r.mean == 1.0);
  CHECK(r.k == 2);
}

TEST_CASE("silhouette against a hand computation") {
  // Four objects, k = 3: objects 0 and 1 merged, 2 and 3 alone.
  const auto d = DissimilarityMatrix::from_rows(
      {{0, 1, 4, 6}, {1, 0, 3, 5}, {4, 3, 0, 2}, {6, 5, 2, 0}});
  const auto sol = assign_to_medoids(d, {0, 2, 3});
  const auto r = silhouette(d, sol);
  // Object 0: a = 1, b = min(4, 6) = 4. Object 1: a = 1, b = min(3, 5) = 3.
  CHECK(r.per_object[0] == doctest::Approx(3.0 / 4));
  CHECK(r.per_object[1] == doctest::Approx(2.0 / 3));
  CHECK(r.per_object[2] == 0.0);
  CHECK(r.per_object[3] == 0.0);
  CHECK(r.mean == doctest::Approx((0.75 + 2.0 / 3) / 4));

  CHECK_THROWS_AS(silhouette(d, assign_to_medoids(d, {0})), Error);

  std::stringstream ss;
  write_silhouette_tsv(ss, r, d, sol);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(header == "label\tcluster\tsilhouette");
  CHECK(row == "1\t1\t0.75");
}

TEST_CASE("silhouettes lie in [-1, 1]") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto d = fixtures::random_delta(rng, 9);
    const auto r = silhouette(d, solve_exact({d, 2 + static_cast<std::size_t>(t % 3)}));
    for (double s : r.per_object) {
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("agglomeration merges in forced order") {
  const auto d = DissimilarityMatrix::from_rows({{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
  const auto tree = agglomerate(d);
  REQUIRE(tree.merges.size() == 2);
  CHECK(tree.merges[0].a == 0);
  CHECK(tree.merges[0].b == 1);
  CHECK(tree.merges[0].height == 1.0);
  CHECK(tree.merges[1].a == 2);
  CHECK(tree.merges[1].b == 3);
  CHECK(tree.merges[1].height == 10.0);
  CHECK(tree.merges[1].size == 3);
  CHECK(to_newick(tree) == "(3:10,(1:1,2:1):9);\n");

  const auto sq = agglomerate(d, Linkage::Average, HeightTransform::Square);
  CHECK(sq.merges[0].a == 0);
  CHECK(sq.merges[0].b == 1);
  CHECK(sq.merges[0].height == 1.0);
  CHECK(sq.merges[1].height == 100.0);
}

TEST_CASE("linkage rules against a scalar oracle") {
  const auto d = DissimilarityMatrix::from_rows(
      {{0, 2, 6, 10}, {2, 0, 5, 9}, {6, 5, 0, 4}, {10, 9, 4, 0}});
  // First merge {0,1} at 2, then {2,3} at 4; the final height depends on the rule.
  CHECK(agglomerate(d, Linkage::Single).merges[2].height == 5.0);
  CHECK(agglomerate(d, Linkage::Complete).merges[2].height == 10.0);
  CHECK(agglomerate(d, Linkage::Average).merges[2].height == (6.0 + 10 + 5 + 9) / 4);
}

TEST_CASE("square transform on random inputs keeps single-linkage order") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto d = fixtures::random_delta(rng, 8);
    const auto plain = agglomerate(d, Linkage::Single);
    const auto sq = agglomerate(d, Linkage::Single, HeightTransform::Square);
    REQUIRE(plain.merges.size() == 7);
    for (std::size_t s = 0; s < 7; ++s) {
      CHECK(plain.merges[s].a == sq.merges[s].a);
      CHECK(plain.merges[s].b == sq.merges[s].b);
      CHECK(sq.merges[s].height == doctest::Approx(plain.merges[s].height * plain.merges[s].height));
    }
    for (Linkage l : {Linkage::Average, Linkage::Single, Linkage::Complete}) {
      const auto tree = agglomerate(d, l);
      for (std::size_t s = 1; s < tree.merges.size(); ++s)
        CHECK(tree.merges[s].height >= tree.merges[s - 1].height);
      CHECK(tree.merges.back().size == 8);
    }
  }
}

TEST_CASE("merge table and linkage names") {
  const auto d = DissimilarityMatrix::from_rows({{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
  std::stringstream ss;
  write_merge_table(ss, agglomerate(d));
  CHECK(ss.str() == "step\tcluster_a\tcluster_b\theight\tsize\n1\t1\t2\t1\t2\n2\t3\t#1\t10\t3\n");
  CHECK(parse_linkage("complete") == Linkage::Complete);
  CHECK(to_string(Linkage::Single) == "single");
  CHECK_THROWS_AS(parse_linkage("ward"), Error);
}

TEST_CASE("box statistics") {
  const auto zero = box_stats({0, 0, 0, 0});
  CHECK(zero.min == 0.0);
  CHECK(zero.max == 0.0);
  CHECK(zero.median == 0.0);

  const auto one = box_stats({0.3});
  CHECK(one.min == one.median);
  CHECK(one.median == one.max);

  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> v(5 + t);
    for (auto& x : v) x = u(rng);
    v.push_back(5.0);  // far outlier
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double p) {
      const double h = p * static_cast<double>(sorted.size() - 1);
      const auto lo = static_cast<std::size_t>(h);
      const auto hi = std::min(lo + 1, sorted.size() - 1);
      return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    const auto s = box_stats(v);
    CHECK(s.q1 == doctest::Approx(q(0.25)));
    CHECK(s.median == doctest::Approx(q(0.5)));
    CHECK(s.q3 == doctest::Approx(q(0.75)));
    CHECK(s.max == 5.0);
    CHECK(s.whisker_high < 5.0);
  }
  CHECK_THROWS_AS(box_stats({}), Error);
}

TEST_CASE("per-cluster CR summary") {
  const double w[] = {0.4, 0.3, 0.2, 0.1};
  std::vector<Pcm> pcms(3, consistent_pcm(w));
  for (const auto& g : fixtures::kHouseD1) pcms.push_back(fixtures::pcm(g));
  const auto d = build_delta(pcms, Measure::D1);
  const auto sol = assign_to_medoids(d, {0, 3});
  const auto summary = cluster_cr_summary(pcms, sol);
  REQUIRE(summary.clusters.size() == 2);
  CHECK(summary.cr.size() == pcms.size());
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> crs;
    for (std::size_t i : sol.members(c)) crs.push_back(consistency_report(pcms[i]).cr);
    const auto expected = box_stats(crs);
    CHECK(summary.clusters[c].size == crs.size());
    CHECK(summary.clusters[c].cr.median == expected.median);
    CHECK(summary.clusters[c].cr.max == expected.max);
  }
  CHECK(summary.clusters[0].cr.min < 1e-12);
}
