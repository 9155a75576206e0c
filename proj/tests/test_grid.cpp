#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "coevgan/grid.hpp"

using namespace coevgan;

namespace {
std::vector<GridCoord> as_vec(const Neighborhood& n) { return {n.begin(), n.end()}; }
}  // namespace

TEST_CASE("neighborhood order is center, west, north, east, south") {
  GridConfig cfg{4};
  CHECK(as_vec(neighborhood({1, 1}, cfg)) ==
        std::vector<GridCoord>{{1, 1}, {1, 0}, {0, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("neighborhood wraps on both axes") {
  GridConfig cfg{3};
  CHECK(as_vec(neighborhood({0, 0}, cfg)) ==
        std::vector<GridCoord>{{0, 0}, {0, 2}, {2, 0}, {0, 1}, {1, 0}});
}

TEST_CASE("1x1 torus maps every direction to itself") {
  GridConfig cfg{1};
  for (const auto& c : neighborhood({0, 0}, cfg)) CHECK(c == GridCoord{0, 0});
}

TEST_CASE("invalid coordinates are rejected") {
  GridConfig cfg{3};
  CHECK_THROWS_AS(neighborhood({3, 0}, cfg), std::domain_error);
  CHECK_THROWS_AS(neighborhood({0, -1}, cfg), std::domain_error);
  CHECK_THROWS_AS(overlap_listeners({5, 5}, cfg), std::domain_error);
}

TEST_CASE("overlap listeners") {
  SUBCASE("(1,0) on 4x4 is heard by (1,1)") {
    auto l = overlap_listeners({1, 0}, GridConfig{4});
    CHECK(std::find(l.begin(), l.end(), GridCoord{1, 1}) != l.end());
  }
  SUBCASE("2x2 corner") {
    CHECK(overlap_listeners({0, 0}, GridConfig{2}) ==
          std::vector<GridCoord>{{0, 0}, {0, 1}, {1, 0}});
  }
  SUBCASE("equals the neighborhood set on m >= 3") {
    for (int m = 3; m <= 6; ++m) {
      GridConfig cfg{m};
      for (const auto& c : cfg.all_cells()) {
        auto n = neighborhood(c, cfg);
        std::set<GridCoord> expect(n.begin(), n.end());
        auto got = overlap_listeners(c, cfg);
        CHECK(std::set<GridCoord>(got.begin(), got.end()) == expect);
      }
    }
  }
}

TEST_CASE("torus properties") {
  for (int m = 1; m <= 6; ++m) {
    CAPTURE(m);
    GridConfig cfg{m};
    std::map<GridCoord, int> appearances;
    for (const auto& a : cfg.all_cells()) {
      auto na = neighborhood(a, cfg);
      CHECK(na[0] == a);
      if (m >= 3) CHECK(std::set<GridCoord>(na.begin(), na.end()).size() == 5);
      for (const auto& c : na) ++appearances[c];
      for (const auto& b : cfg.all_cells()) {
        auto nb = neighborhood(b, cfg);
        const bool a_in_b = std::find(nb.begin(), nb.end(), a) != nb.end();
        const bool b_in_a = std::find(na.begin(), na.end(), b) != na.end();
        CHECK(a_in_b == b_in_a);
      }
    }
    CHECK(appearances.size() == static_cast<std::size_t>(m * m));
    for (const auto& [c, k] : appearances) CHECK(k == 5);
  }
}

TEST_CASE("row-major indexing round-trips") {
  GridConfig cfg{5};
  for (std::size_t i = 0; i < 25; ++i) CHECK(cfg.index_of(cfg.coord_of(i)) == i);
  CHECK(cfg.population_size() == 25);
}
