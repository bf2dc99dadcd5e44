#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qos/game.hpp"

namespace qos {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

// Undirected edge between 0-based vertices, stored with first < second.
using Edge = std::pair<int, int>;

// Undirected, unweighted interference graph over the players. Kept both as a
// sorted edge list and as adjacency lists.
class InterferenceGraph {
 public:
  InterferenceGraph(int num_vertices, std::vector<Edge> edges,
                    std::vector<Point> positions = {});

  int num_vertices() const { return num_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int n) const { return adjacency_[n]; }
  const std::vector<Point>& positions() const { return positions_; }
  bool has_positions() const { return !positions_.empty(); }
  bool adjacent(int n, int m) const;
  bool is_complete() const;

  bool operator==(const InterferenceGraph& other) const {
    return num_vertices_ == other.num_vertices_ && edges_ == other.edges_ &&
           positions_ == other.positions_;
  }

 private:
  int num_vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<Point> positions_;
};

// Closed neighbourhood: neighbours of n plus n itself, ascending.
std::vector<int> Neighborhood(const InterferenceGraph& graph, int n);

InterferenceGraph CompleteGraph(int n);

// n points uniform on [0, width] x [0, height]; an edge joins two points whose
// Euclidean distance is <= range. Deterministic in `seed`.
InterferenceGraph RandomGeometricGraph(int n, double width, double height, double range,
                                       std::uint64_t seed);

// Erdos-Renyi G(n, p); used to produce arbitrary topologies for testing.
InterferenceGraph RandomGraph(int n, double edge_probability, std::uint64_t seed);

class SpatialGame {
 public:
  SpatialGame(Game game, InterferenceGraph graph);
  // Complete interference graph: the ordinary (non-spatial) game.
  explicit SpatialGame(Game game);

  const Game& game() const { return game_; }
  const InterferenceGraph& graph() const { return graph_; }
  int num_players() const { return game_.num_players(); }
  int num_channels() const { return game_.num_channels(); }
  int threshold(int n, int c) const { return game_.threshold(n, c); }

 private:
  Game game_;
  InterferenceGraph graph_;
};

// Players in Ne(n) using channel c.
int LocalCongestion(const SpatialGame& sgame, const Profile& profile, int n, int c);

int SpatialUtility(const SpatialGame& sgame, const Profile& profile, int n);
// Utility n would get by switching to `strategy` with everybody else fixed.
int SpatialUtilityIf(const SpatialGame& sgame, const Profile& profile, int n, int strategy);
int SpatialWelfare(const SpatialGame& sgame, const Profile& profile);
int SpatialSatisfiedCount(const SpatialGame& sgame, const Profile& profile);

}  // namespace qos
