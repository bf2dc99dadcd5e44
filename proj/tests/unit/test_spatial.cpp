#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "qos/errors.hpp"
#include "qos/spatial.hpp"

using qos::Game;
using qos::InterferenceGraph;
using qos::Profile;
using qos::SpatialGame;

TEST_SUITE("spatial") {

TEST_CASE("neighbourhoods") {
  const InterferenceGraph empty(3, {});
  CHECK(qos::Neighborhood(empty, 0) == std::vector<int>{0});
  CHECK(qos::Neighborhood(qos::CompleteGraph(3), 1) == std::vector<int>{0, 1, 2});
  const InterferenceGraph path(3, {{0, 1}, {1, 2}});
  CHECK(qos::Neighborhood(path, 0) == std::vector<int>{0, 1});
  CHECK(qos::Neighborhood(path, 1) == std::vector<int>{0, 1, 2});
}

TEST_CASE("graph validation and normalisation") {
  const InterferenceGraph g(3, {{2, 0}, {1, 0}});
  CHECK(g.edges() == std::vector<qos::Edge>{{0, 1}, {0, 2}});
  CHECK(g.adjacent(2, 0));
  CHECK_FALSE(g.adjacent(1, 2));
  CHECK_THROWS_AS(InterferenceGraph(2, {{1, 1}}), qos::DomainError);
  CHECK_THROWS_AS(InterferenceGraph(2, {{0, 1}, {1, 0}}), qos::DomainError);
  CHECK_THROWS_AS(InterferenceGraph(2, {{0, 2}}), qos::DomainError);
  CHECK_THROWS_AS(SpatialGame(Game::FromRows({{1}, {1}}), qos::CompleteGraph(3)), qos::DomainError);
}

TEST_CASE("complete graph edge counts") {
  CHECK(qos::CompleteGraph(1).edges().empty());
  CHECK(qos::CompleteGraph(3).edges().size() == 3);
  CHECK(qos::CompleteGraph(5).edges().size() == 10);
  CHECK(qos::CompleteGraph(5).is_complete());
  CHECK_FALSE(InterferenceGraph(3, {{0, 1}}).is_complete());
}

TEST_CASE("local congestion and spatial utility") {
  // Two-colour picture: player 1 shares channel 2 with neighbour 0 only;
  // player 2 also sits on channel 2 but is not adjacent to player 1.
  const Game g = Game::FromRows({{3, 3}, {2, 2}, {3, 3}});
  const SpatialGame sg(g, InterferenceGraph(3, {{0, 1}, {0, 2}}));
  const Profile x{2, 2, 2};
  CHECK(qos::LocalCongestion(sg, x, 1, 2) == 2);
  CHECK(qos::SpatialUtility(sg, x, 1) == 1);
  CHECK(qos::LocalCongestion(sg, x, 0, 2) == 3);

  const SpatialGame isolated(Game::FromRows({{1}, {1}}), InterferenceGraph(2, {}));
  CHECK(qos::LocalCongestion(isolated, {1, 1}, 0, 1) == 1);
  CHECK(qos::SpatialUtility(isolated, {1, 1}, 0) == 1);
  CHECK(qos::SpatialUtility(isolated, {0, 1}, 0) == 0);

  // Star: centre with threshold 1, every leaf on the centre's channel.
  const SpatialGame star(Game::FromRows({{1}, {5}, {5}, {5}}), InterferenceGraph(4, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(qos::SpatialUtility(star, {1, 1, 1, 1}, 0) == -1);
  CHECK(qos::SpatialUtility(star, {1, 1, 1, 1}, 1) == 1);
  CHECK(qos::SpatialUtilityIf(star, {1, 1, 1, 1}, 0, 0) == 0);
}

TEST_CASE("spatial utility agrees with the oracle on random graphs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int c = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto t = oracle::RandomMatrix(rng, n, c, 0, n + 1);
    const auto graph = qos::RandomGraph(n, std::uniform_real_distribution<double>(0, 1)(rng), rng());
    const SpatialGame sg(Game::FromRows(t), graph);
    const SpatialGame plain(Game::FromRows(t));
    const auto adj = oracle::ClosedAdjacency(graph);
    const auto full = oracle::FullAdjacency(n);
    oracle::ForEachProfile(n, c, [&](const Profile& x) {
      for (int p = 0; p < n; ++p) {
        REQUIRE(qos::SpatialUtility(sg, x, p) == oracle::Utility(t, adj, x, p));
        REQUIRE(qos::SpatialUtility(plain, x, p) == qos::Utility(plain.game(), x, p));
        if (x[p] != 0) REQUIRE(qos::LocalCongestion(sg, x, p, x[p]) >= 1);
      }
    });
  }
}

TEST_CASE("random geometric graph") {
  CHECK(qos::RandomGeometricGraph(2, 10, 10, 15, 1).edges().size() == 1);
  CHECK(qos::RandomGeometricGraph(2, 10, 10, 0, 1).edges().empty());

  const auto g = qos::RandomGeometricGraph(50, 100, 100, 50, 42);
  CHECK(g == qos::RandomGeometricGraph(50, 100, 100, 50, 42));
  CHECK_FALSE(g == qos::RandomGeometricGraph(50, 100, 100, 50, 43));
  REQUIRE(g.positions().size() == 50);
  std::size_t expected = 0;
  for (int a = 0; a < 50; ++a) {
    const auto& pa = g.positions()[a];
    CHECK(pa.x >= 0.0);
    CHECK(pa.x <= 100.0);
    CHECK(pa.y >= 0.0);
    CHECK(pa.y <= 100.0);
    for (int b = a + 1; b < 50; ++b) {
      const auto& pb = g.positions()[b];
      const bool near = std::hypot(pa.x - pb.x, pa.y - pb.y) <= 50.0;
      if (near) ++expected;
      CHECK(g.adjacent(a, b) == near);
      CHECK(g.adjacent(b, a) == near);
    }
  }
  CHECK(g.edges().size() == expected);
  // Regression pin for the seeded generator.
  CHECK(g.edges().size() == 726);
}

}  // TEST_SUITE
