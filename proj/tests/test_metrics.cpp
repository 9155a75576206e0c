#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coevgan/metrics.hpp"

using namespace coevgan;

TEST_CASE("tvd examples") {
  CHECK(tvd(ClassDistribution::uniform_ideal(std::vector<std::uint64_t>(10, 7))) == 0.0);
  std::vector<std::uint64_t> one(10, 0);
  one[3] = 50;
  CHECK(tvd(ClassDistribution::uniform_ideal(one)) == 0.9);
  CHECK(tvd({{1, 3}, {0.25, 0.75}}) == 0.0);
  CHECK_THROWS_AS(tvd(ClassDistribution::uniform_ideal({0, 0})), std::domain_error);
  CHECK_THROWS_AS(tvd({{1, 2}, {1.0}}), std::domain_error);
}

TEST_CASE("tvd is invariant under a joint relabelling") {
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + rng.index(8);
    ClassDistribution d;
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d.counts.push_back(rng.index(20) + 1);
      d.ideal.push_back(rng.uniform() + 0.01);
      total += d.ideal.back();
    }
    for (auto& q : d.ideal) q /= total;
    auto perm = rng.sample_without_replacement(n, n);
    ClassDistribution p;
    for (auto i : perm) {
      p.counts.push_back(d.counts[i]);
      p.ideal.push_back(d.ideal[i]);
    }
    CHECK(tvd(p) == doctest::Approx(tvd(d)).epsilon(1e-12));
  }
}

TEST_CASE("l2 diversity") {
  SUBCASE("identical vectors") {
    std::vector<std::vector<double>> v(4, {1.0, 2.0, 3.0});
    auto r = l2_diversity(v);
    for (const auto& row : r.distances)
      for (double x : row) CHECK(x == 0.0);
  }
  SUBCASE("3-4-5") {
    std::vector<std::vector<double>> v{{0, 0}, {3, 4}};
    auto r = l2_diversity(v);
    CHECK(r.distances[0][1] == 5.0);
    CHECK(r.stats.mean == 5.0);
    CHECK(r.stats.count == 1);
  }
  SUBCASE("naive recomputation and triangle inequality") {
    Rng rng(2);
    std::vector<std::vector<double>> v(6, std::vector<double>(9));
    for (auto& x : v)
      for (auto& y : x) y = rng.normal();
    auto r = l2_diversity(v);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        double ss = 0;
        for (std::size_t k = 0; k < 9; ++k) ss += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
        CHECK(r.distances[i][j] == doctest::Approx(std::sqrt(ss)).epsilon(1e-14));
        for (std::size_t k = 0; k < 6; ++k)
          CHECK(r.distances[i][k] <= r.distances[i][j] + r.distances[j][k] + 1e-12);
      }
  }
  SUBCASE("length mismatch") {
    std::vector<std::vector<double>> v{{0, 0}, {1}};
    CHECK_THROWS_AS(l2_diversity(v), std::domain_error);
  }
}

TEST_CASE("summary statistics") {
  auto s = summarize({4, 1, 3, 2, 5});
  CHECK(s.mean == 3.0);
  CHECK(s.median == 3.0);
  CHECK(s.iqr == 2.0);
  CHECK(s.min == 1.0);
  CHECK(s.max == 5.0);
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK(summarize({1, 2, 3, 4}).median == 2.5);
}

TEST_CASE("success rate") {
  std::vector<double> d{0.05, 0.2};
  CHECK(success_rate(d, 0.1) == 0.5);
  std::vector<double> boundary{0.1};
  CHECK(success_rate(boundary, 0.1) == 0.0);
  toy::ToyTarget t;
  std::vector<toy::ToyGenerator> at(3, toy::ToyGenerator{2, -2});
  CHECK(success_rate(at, t, 0.1) == 1.0);
  CHECK_THROWS_AS(success_rate(std::vector<double>{}, 0.1), std::domain_error);
  CHECK_THROWS_AS(success_rate(d, 0.0), std::domain_error);
  Rng rng(3);
  std::vector<double> many(50);
  for (auto& x : many) x = rng.uniform();
  double prev = 0;
  for (double th = 0.01; th < 1.1; th += 0.05) {
    CHECK(success_rate(many, th) >= prev);
    prev = success_rate(many, th);
  }
}

TEST_CASE("mode assignment") {
  std::vector<std::array<double, 2>> centers{{1, 0}, {-1, 0}};
  nn::Matrix pts(2, 4);
  pts << 1.01, -0.98, 0.0, 1.0, 0.0, 0.01, 0.0, 0.02;
  auto a = assign_modes(pts, centers, 0.05);
  CHECK(a.counts == std::vector<std::uint64_t>{2, 1});
  CHECK(a.rejected == 1);
  CHECK(a.low_quality_fraction() == 0.25);
  CHECK(ensemble_tvd(a) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(ensemble_quality_score(a) == doctest::Approx(1.0 / 6.0 + 0.25).epsilon(1e-15));
}
