#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pcmclust/error.hpp"
#include "pcmclust/pcm.hpp"

using namespace pcmclust;

namespace {

RawGrid raw(const fixtures::Grid& g) {
  RawGrid r;
  for (const auto& row : g) {
    std::vector<std::optional<double>> out;
    for (double v : row) out.emplace_back(v);
    r.push_back(std::move(out));
  }
  return r;
}

Errc code_of(const RawGrid& g, ValidationOptions options = {}) {
  try {
    validate_pcm(g, "x", options);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("validation accepts well-formed matrices") {
  const Pcm a = fixtures::lemma_a();
  CHECK(a.order() == 3);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(1, 0) == 0.5);
  CHECK(a.is_complete());

  const Pcm ones = make_pcm(fixtures::Grid(5, std::vector<double>(5, 1.0)));
  CHECK(is_consistent(ones, 1e-12));
}

TEST_CASE("validation errors") {
  CHECK(code_of(raw({{1, 2}, {3, 1}})) == Errc::NonReciprocal);
  CHECK(code_of(raw({{1, 2, 1}, {0.5, 1, 1}})) == Errc::NotSquare);
  CHECK(code_of(raw({{2, 2}, {0.5, 1}})) == Errc::BadDiagonal);
  CHECK(code_of(raw({{1, -2}, {-0.5, 1}})) == Errc::NonPositiveEntry);
  CHECK(code_of(raw({{1, 0}, {0, 1}})) == Errc::NonPositiveEntry);
  CHECK(code_of(raw({{1, NAN}, {NAN, 1}})) == Errc::NonPositiveEntry);
  CHECK(code_of({}) == Errc::NotSquare);

  // 1-2 and 3-4 are compared, nothing links the two pairs.
  RawGrid split = raw({{1, 2, 1, 1}, {0.5, 1, 1, 1}, {1, 1, 1, 3}, {1, 1, 1.0 / 3, 1}});
  for (int i : {0, 1})
    for (int j : {2, 3}) {
      split[i][j].reset();
      split[j][i].reset();
    }
  CHECK(code_of(split) == Errc::DisconnectedGraph);

  // One side of a pair given, the other missing.
  RawGrid half = raw({{1, 2}, {0.5, 1}});
  half[1][0].reset();
  CHECK(code_of(half) == Errc::NonReciprocal);
}

TEST_CASE("repair fixes rounded reciprocals and keeps the larger entry") {
  RawGrid g = raw({{1, 2, 7}, {0.5, 1, 3}, {0.143, 1.0 / 3, 1}});
  CHECK(code_of(g) == Errc::NonReciprocal);

  std::vector<std::string> warnings;
  ValidationOptions options;
  options.repair = true;
  const Pcm p = validate_pcm(g, "r", options, &warnings);
  CHECK(p(0, 2) == 7.0);
  CHECK(p(2, 0) == doctest::Approx(1.0 / 7).epsilon(1e-15));
  CHECK(warnings.size() == 1);

  // Beyond the repair tolerance the error stands.
  CHECK(code_of(raw({{1, 2}, {0.6, 1}}), options) == Errc::NonReciprocal);
}

TEST_CASE("incomplete matrices") {
  RawGrid g = raw({{1, 2, 4}, {0.5, 1, 2}, {0.25, 0.5, 1}});
  g[0][2].reset();
  g[2][0].reset();
  const Pcm p = validate_pcm(g, "gap");
  CHECK_FALSE(p.is_complete());
  CHECK(p.missing_pairs() == 1);
  CHECK_FALSE(p.has(0, 2));
  CHECK(p.has(0, 1));
  CHECK_THROWS_AS(lambda_max(p), Error);
  try {
    llsm_weights(p);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IncompleteMatrix);
  }
  CHECK(p.to_grid() == g);
}

TEST_CASE("consistency check") {
  CHECK(is_consistent(fixtures::pcm(fixtures::kCountryAreas), 5e-3));
  CHECK_FALSE(is_consistent(fixtures::lemma_a(), 5e-3));
  const double w[] = {0.4, 0.3, 0.2, 0.1};
  CHECK(is_consistent(consistent_pcm(w), 1e-12));
}

TEST_CASE("Perron root") {
  CHECK(lambda_max(make_pcm(fixtures::Grid(4, std::vector<double>(4, 1.0)))) ==
        doctest::Approx(4.0).epsilon(1e-12));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<double> w(n);
    for (auto& x : w) x = u(rng);
    CHECK(std::abs(lambda_max(consistent_pcm(w)) - static_cast<double>(n)) < 1e-9);
  }

  // Scalar oracle for a 3x3 matrix: lambda_max = 1 + c^(1/3) + c^(-1/3) with
  // c = a12 a23 / a13.
  const Pcm a = fixtures::lemma_a();
  const double c = 2.0 * 1.0 / 1.0;
  const double expected = 1.0 + std::cbrt(c) + 1.0 / std::cbrt(c);
  CHECK(std::abs(lambda_max(a) - expected) < 1e-12);

  // Random matrices are never below n.
  for (int t = 0; t < 50; ++t) {
    const Pcm p = fixtures::random_pcm(rng, 3 + t % 6);
    CHECK(lambda_max(p) >= static_cast<double>(p.order()) - 1e-12);
  }
}

TEST_CASE("consistency ratio") {
  const double w[] = {1, 2, 3};
  const auto r = consistency_report(consistent_pcm(w));
  CHECK(std::abs(r.ci) < 1e-12);
  CHECK(std::abs(r.cr) < 1e-12);
  CHECK(r.ri_used == doctest::Approx(0.58));

  const auto two = consistency_report(make_pcm({{1, 3}, {1.0 / 3, 1}}));
  CHECK(two.cr == 0.0);

  const auto s1 = consistency_report(fixtures::pcm(fixtures::kHouseD1[0]));
  CHECK(std::abs(s1.cr - 0.007) < 2e-3);
  const auto s3 = consistency_report(fixtures::pcm(fixtures::kHouseD1[2]));
  CHECK(std::abs(s3.cr - 0.028) < 2e-3);
  const auto t3 = consistency_report(fixtures::pcm(fixtures::kHouseD3[2]));
  CHECK(std::abs(t3.cr - 0.022) < 2e-3);

  RandomIndexTable small{{3, 0.58}};
  try {
    consistency_report(fixtures::pcm(fixtures::kHouseD1[0]), small);
    FAIL("expected MissingRandomIndex");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingRandomIndex);
  }
}

TEST_CASE("geometric-mean weights") {
  const auto w = llsm_weights(fixtures::pcm(fixtures::kHouseD1[0]));
  const double expected[] = {0.495, 0.291, 0.067, 0.148};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(w[i] - expected[i]) < 5e-4);

  const auto u = llsm_weights(make_pcm(fixtures::Grid(5, std::vector<double>(5, 1.0))));
  for (double x : u.values()) CHECK(x == doctest::Approx(0.2).epsilon(1e-15));

  const auto c3 = llsm_weights(fixtures::pcm(fixtures::kHouseOneD3));
  const double e3[] = {0.319, 0.166, 0.219, 0.296};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(c3[i] - e3[i]) < 5e-4);

  // Recovers the generating weights of a consistent matrix.
  const double g[] = {0.5, 0.25, 0.125, 0.125};
  const auto back = llsm_weights(consistent_pcm(g));
  for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(g[i]).epsilon(1e-12));
}

TEST_CASE("rankings") {
  const auto agg = WeightVector::normalized({0.410, 0.164, 0.146, 0.279});
  CHECK(format_ranking(ranking_from_weights(agg)) == "1 > 4 > 2 > 3");
  const auto d3 = WeightVector::normalized({0.319, 0.166, 0.219, 0.296});
  CHECK(format_ranking(ranking_from_weights(d3)) == "1 > 4 > 3 > 2");
  const auto flat = WeightVector::normalized({1, 1, 1, 1, 1});
  CHECK(ranking_from_weights(flat) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(WeightVector::normalized({1, 0, 2}), Error);
}
