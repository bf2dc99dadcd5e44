#pragma once

// Reduction from 3-dimensional matching to the social-optimum problem.
//
// Player layout of a reduced game with I elements per side and J triples:
//   players 0 .. I-1          elements x = 1..I of X
//   players I .. 2I-1         elements y = 1..I of Y
//   players 2I .. 3I-1        elements z = 1..I of Z
//   players 3I .. 2I+J-1      J - I padding players
// Channel m (1-based) is triple m - 1 of the instance.

#include <cstdint>
#include <functional>
#include <vector>

#include "qos/game.hpp"

namespace qos {

struct Triple {
  int x = 1;
  int y = 1;
  int z = 1;
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

struct ThreeDmInstance {
  int size = 0;  // I, elements per side
  std::vector<Triple> triples;
  bool operator==(const ThreeDmInstance&) const = default;
};

// Throws DomainError unless J >= I >= 1, coordinates lie in [1, I] and the
// triples are distinct.
void ValidateInstance(const ThreeDmInstance& instance);

Game Reduce3dm(const ThreeDmInstance& instance);

// Welfare of the reduced game's optimum iff a perfect matching exists.
int MatchingTargetWelfare(const ThreeDmInstance& instance);

using OptimumOracle = std::function<int(const Game&)>;

// (C+1)^N guard applied by the default oracle. Reduced games are large in
// profile count but their natural profiles are few, so the guard sits above
// the generic default.
inline constexpr std::uint64_t kReductionSearchBudget = 10'000'000'000ULL;

// True iff the optimum welfare of the reduced game equals 2I + J. The default
// oracle is BruteForceOptimum with kReductionSearchBudget.
bool DecideMatchingViaGame(const ThreeDmInstance& instance, const OptimumOracle& oracle = {});

inline constexpr int kMaxBruteForceTriples = 20;

// Searches I-subsets of the triples for a pairwise coordinate-disjoint one.
// Throws BudgetExceeded when J > kMaxBruteForceTriples.
bool BruteForce3dm(const ThreeDmInstance& instance);

enum class InstanceKind {
  kPlanted,    // contains a perfect matching by construction
  kBlocked,    // some x value appears in no triple, so no perfect matching
  kUniform,    // J distinct triples drawn uniformly
};

// Requires J <= I^3 (or (I-1) I^2 for kBlocked, which also needs I >= 2).
ThreeDmInstance RandomThreeDmInstance(int size, int num_triples, InstanceKind kind,
                                      std::uint64_t seed);

}  // namespace qos
