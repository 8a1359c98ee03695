#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "fixtures.hpp"
#include "pcmclust/aggregation.hpp"
#include "pcmclust/error.hpp"

using namespace pcmclust;

TEST_CASE("geometric aggregation") {
  const Pcm a = fixtures::pcm(fixtures::kHouseD1[0]);
  const auto same = aggregate_geometric({a, a, a});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(same.aggregate(i, j) == doctest::Approx(a(i, j)).epsilon(1e-14));
  CHECK(same.method == "geometric_mean");

  fixtures::Grid t(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t[i][j] = a(j, i);
  const auto cancel = aggregate_geometric({a, make_pcm(t)});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cancel.weights[i] == doctest::Approx(0.25).epsilon(1e-12));
    for (std::size_t j = 0; j < 4; ++j) CHECK(cancel.aggregate(i, j) == doctest::Approx(1.0));
  }

  std::mt19937_64 rng(31);
  for (int r = 0; r < 10; ++r) {
    const Pcm x = fixtures::random_pcm(rng, 5), y = fixtures::random_pcm(rng, 5),
              z = fixtures::random_pcm(rng, 5);
    const auto g = aggregate_geometric({x, y, z});
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(g.aggregate(i, j) == doctest::Approx(std::cbrt(x(i, j) * y(i, j) * z(i, j))));
  }

  try {
    aggregate_geometric({});
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyInput);
  }
  CHECK_THROWS_AS(aggregate_geometric({a, fixtures::lemma_a()}), Error);
}

TEST_CASE("geometric aggregation over incomplete inputs") {
  const double w[] = {4, 2, 1};
  const Pcm full = consistent_pcm(w);
  RawGrid g = full.to_grid();
  g[0][2].reset();
  g[2][0].reset();
  const Pcm gap = validate_pcm(g, "gap");
  const auto out = aggregate_geometric({full, gap});
  CHECK(out.aggregate.is_complete());
  CHECK(out.aggregate(0, 2) == doctest::Approx(4.0));

  try {
    aggregate_geometric({gap, gap});
    FAIL("expected IncompleteMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IncompleteMatrix);
  }
}

TEST_CASE("medoid aggregation") {
  const std::vector<Pcm> triple{fixtures::lemma_a(), fixtures::lemma_b(), fixtures::lemma_c()};
  const auto out = aggregate_by_medoid(triple, Measure::D3);
  CHECK(out.medoid == 1);
  CHECK(out.aggregate == triple[1]);
  CHECK(out.method == "medoid_D3");
  CHECK(std::abs(*out.objective - 0.25) < 1e-12);

  const auto single = aggregate_by_medoid({triple[0]}, Measure::D1);
  CHECK(single.aggregate == triple[0]);
  CHECK(single.medoid == 0);
  CHECK(*single.objective == 0.0);
}

TEST_CASE("one-cluster centres give the printed weights and rankings") {
  const auto d1 = llsm_weights(fixtures::pcm(fixtures::kHouseOneD1));
  const double e1[] = {0.381, 0.185, 0.099, 0.334};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(d1[i] - e1[i]) < 5e-4);
  CHECK(format_ranking(ranking_from_weights(d1)) == "1 > 4 > 2 > 3");

  const auto d3 = llsm_weights(fixtures::pcm(fixtures::kHouseOneD3));
  CHECK(format_ranking(ranking_from_weights(d3)) == "1 > 4 > 3 > 2");
}

TEST_CASE("priority aggregation") {
  const double w[] = {0.5, 0.3, 0.2};
  const auto p = aggregate_priorities({consistent_pcm(w), consistent_pcm(w)});
  for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(w[i]));
  CHECK_THROWS_AS(aggregate_priorities({}), Error);
}

TEST_CASE("ranking comparison") {
  const std::size_t geo[] = {0, 3, 1, 2};
  const std::size_t med[] = {0, 3, 2, 1};
  const auto c = compare_rankings(geo, med);
  CHECK_FALSE(c.equal);
  REQUIRE(c.reversals.size() == 1);
  CHECK(c.reversals[0] == std::pair<std::size_t, std::size_t>{1, 2});

  CHECK(compare_rankings(geo, geo).equal);
  CHECK(compare_rankings(geo, geo).reversals.empty());

  const std::size_t up[] = {0, 1, 2};
  const std::size_t down[] = {2, 1, 0};
  const auto full = compare_rankings(up, down);
  CHECK(full.reversals.size() == 3);

  const std::size_t shorter[] = {0, 1};
  const std::size_t dup[] = {0, 0, 1};
  try {
    compare_rankings(up, shorter);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LengthMismatch);
  }
  CHECK_THROWS_AS(compare_rankings(up, dup), Error);
}

TEST_CASE("aggregation JSON") {
  const auto out = aggregate_by_medoid(
      {fixtures::lemma_a(), fixtures::lemma_b(), fixtures::lemma_c()}, Measure::D3);
  std::stringstream ss;
  write_aggregation_json(ss, out);
  const auto doc = nlohmann::json::parse(ss.str());
  CHECK(doc["method"] == "medoid_D3");
  CHECK(doc["label"] == "B");
  CHECK(doc["matrix"][0][1].get<double>() == 3.0);
  CHECK(doc["ranking"].size() == 3);
  CHECK(doc["weights"].size() == 3);
}
