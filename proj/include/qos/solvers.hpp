#pragma once

// Centralised algorithms and exact oracles for (non-spatial) QoS satisfaction
// games.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "qos/game.hpp"

namespace qos {

inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;  // (C+1)^N

// Exact non-negative fraction kept in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  bool operator==(const Rational&) const = default;
  std::strong_ordering operator<=>(const Rational& other) const;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

// (C+1)^N, saturating at UINT64_MAX.
std::uint64_t ProfileSpaceSize(int num_players, int num_channels);
// Throws BudgetExceeded with a size report when (C+1)^N > budget.
void CheckSearchBudget(const Game& game, std::uint64_t budget);

// Algorithm 1 on a game with homogeneous channels. Players are processed in
// descending threshold order (stable on index); each joins the lowest-indexed
// channel whose congestion is still below its threshold, or stays dormant.
// The result is a pure Nash equilibrium and a social optimum. O(C N^2).
Profile Algorithm1(const Game& game);

struct Algorithm1Run {
  std::vector<int> order;          // order[k] = player handled in iteration k+1
  std::vector<Profile> iterates;   // x^0 .. x^N, in original player order
  std::vector<bool> full;          // full[k]: no channel could take order[k]
  Profile result;
};
Algorithm1Run Algorithm1Detailed(const Game& game);

// x_n = 1 + (n mod C) with players numbered from 1.
Profile RoundRobinProfile(int num_players, int num_channels);

struct OptimumResult {
  int welfare = 0;
  Profile witness;  // lexicographically smallest maximiser
};
// Exact social optimum. Optima never contain suffering users, so the search
// walks natural profiles depth first in lexicographic order with a
// remaining-players bound.
OptimumResult BruteForceOptimum(const Game& game, std::uint64_t budget = kDefaultSearchBudget);

// Every pure Nash equilibrium, in lexicographic order, by exhaustive scan of
// all (C+1)^N profiles.
std::vector<Profile> EnumeratePne(const Game& game, std::uint64_t budget = kDefaultSearchBudget);

// Pure-Nash test using channel loads; equivalent to dynamics' IsPureNash on
// the complete graph but O(N C) without building a SpatialGame.
bool IsPureNashComplete(const Game& game, const Profile& profile);

struct PoaReport {
  int optimum_welfare = 0;
  int worst_pne_welfare = 0;
  int best_pne_welfare = 0;
  Rational poa;
  Rational bound;  // min{N, Tmax / Tmin}
  std::size_t pne_count = 0;
  Profile optimum_witness;
  Profile worst_pne;
};

// min{N, Tmax / Tmin}; with Tmin = 0 the ratio is unbounded and N is returned.
Rational PoaBound(const Game& game);

// Throws PreconditionError ("PoA undefined") when the worst equilibrium has
// welfare <= 0, which cannot happen when every threshold is >= 1.
PoaReport PriceOfAnarchy(const Game& game, std::uint64_t budget = kDefaultSearchBudget);

struct HomogeneousUsersCheck {
  bool is_pne = false;
  bool is_canonical_count = false;  // natural and satisfied = min{N, sum_c T^c}
  bool is_optimum = false;
};
// Evaluates the three equivalent characterisations for a game whose users
// share thresholds. `optimum_welfare` < 0 means compute it by brute force.
HomogeneousUsersCheck VerifyHomogeneousUsers(const Game& game, const Profile& profile,
                                             int optimum_welfare = -1);

}  // namespace qos
