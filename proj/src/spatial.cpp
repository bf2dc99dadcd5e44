#include "qos/spatial.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "qos/errors.hpp"

namespace qos {

InterferenceGraph::InterferenceGraph(int num_vertices, std::vector<Edge> edges,
                                     std::vector<Point> positions)
    : num_vertices_(num_vertices), adjacency_(std::max(num_vertices, 0)), positions_(std::move(positions)) {
  if (num_vertices_ < 1) throw DomainError("graph needs at least one vertex");
  if (!positions_.empty() && positions_.size() != static_cast<std::size_t>(num_vertices_)) {
    throw DomainError("position count does not match vertex count");
  }
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_vertices_ || b >= num_vertices_) {
      throw DomainError("edge endpoint out of range: {" + std::to_string(a) + ", " +
                        std::to_string(b) + "}");
    }
    if (a == b) throw DomainError("self-loop on vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw DomainError("duplicate edge");
  }
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

bool InterferenceGraph::adjacent(int n, int m) const {
  const auto& row = adjacency_[n];
  return std::binary_search(row.begin(), row.end(), m);
}

bool InterferenceGraph::is_complete() const {
  const auto n = static_cast<std::size_t>(num_vertices_);
  return edges_.size() == n * (n - 1) / 2;
}

std::vector<int> Neighborhood(const InterferenceGraph& graph, int n) {
  if (n < 0 || n >= graph.num_vertices()) throw DomainError("vertex out of range");
  std::vector<int> out = graph.neighbors(n);
  out.insert(std::upper_bound(out.begin(), out.end(), n), n);
  return out;
}

InterferenceGraph CompleteGraph(int n) {
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  }
  return InterferenceGraph(n, std::move(edges));
}

InterferenceGraph RandomGeometricGraph(int n, double width, double height, double range,
                                       std::uint64_t seed) {
  if (!(width > 0.0) || !(height > 0.0)) throw DomainError("region dimensions must be positive");
  if (!(range >= 0.0)) throw DomainError("interference range must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  std::vector<Point> points(std::max(n, 0));
  for (auto& p : points) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  const double range2 = range * range;
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double dx = points[a].x - points[b].x;
      const double dy = points[a].y - points[b].y;
      if (dx * dx + dy * dy <= range2) edges.emplace_back(a, b);
    }
  }
  return InterferenceGraph(n, std::move(edges), std::move(points));
}

InterferenceGraph RandomGraph(int n, double edge_probability, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(std::clamp(edge_probability, 0.0, 1.0));
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (coin(rng)) edges.emplace_back(a, b);
    }
  }
  return InterferenceGraph(n, std::move(edges));
}

SpatialGame::SpatialGame(Game game, InterferenceGraph graph)
    : game_(std::move(game)), graph_(std::move(graph)) {
  if (graph_.num_vertices() != game_.num_players()) {
    throw DomainError("interference graph has " + std::to_string(graph_.num_vertices()) +
                      " vertices, game has " + std::to_string(game_.num_players()) + " players");
  }
}

SpatialGame::SpatialGame(Game game)
    : game_(std::move(game)), graph_(CompleteGraph(game_.num_players())) {}

int LocalCongestion(const SpatialGame& sgame, const Profile& profile, int n, int c) {
  int count = profile[n] == c ? 1 : 0;
  for (int m : sgame.graph().neighbors(n)) {
    if (profile[m] == c) ++count;
  }
  return count;
}

int SpatialUtilityIf(const SpatialGame& sgame, const Profile& profile, int n, int strategy) {
  if (strategy == kDormant) return 0;
  int load = 1;  // n itself
  for (int m : sgame.graph().neighbors(n)) {
    if (profile[m] == strategy) ++load;
  }
  return load <= sgame.threshold(n, strategy) ? 1 : -1;
}

int SpatialUtility(const SpatialGame& sgame, const Profile& profile, int n) {
  return SpatialUtilityIf(sgame, profile, n, profile[n]);
}

int SpatialWelfare(const SpatialGame& sgame, const Profile& profile) {
  int total = 0;
  for (int n = 0; n < sgame.num_players(); ++n) total += SpatialUtility(sgame, profile, n);
  return total;
}

int SpatialSatisfiedCount(const SpatialGame& sgame, const Profile& profile) {
  int count = 0;
  for (int n = 0; n < sgame.num_players(); ++n) {
    if (SpatialUtility(sgame, profile, n) == 1) ++count;
  }
  return count;
}

}  // namespace qos
