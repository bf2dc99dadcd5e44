#include "qos/hardness.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "qos/errors.hpp"
#include "qos/solvers.hpp"

namespace qos {

void ValidateInstance(const ThreeDmInstance& instance) {
  const int i_size = instance.size;
  const auto j_size = static_cast<int>(instance.triples.size());
  if (i_size < 1) throw DomainError("3DM instance needs I >= 1");
  if (j_size < i_size) {
    throw DomainError("3DM instance needs J >= I (J = " + std::to_string(j_size) +
                      ", I = " + std::to_string(i_size) + ")");
  }
  std::set<Triple> seen;
  for (const Triple& t : instance.triples) {
    for (int v : {t.x, t.y, t.z}) {
      if (v < 1 || v > i_size) {
        throw DomainError("triple coordinate " + std::to_string(v) + " outside 1.." +
                          std::to_string(i_size));
      }
    }
    if (!seen.insert(t).second) {
      throw DomainError("duplicate triple (" + std::to_string(t.x) + "," + std::to_string(t.y) +
                        "," + std::to_string(t.z) + ")");
    }
  }
}

Game Reduce3dm(const ThreeDmInstance& instance) {
  ValidateInstance(instance);
  const int i_size = instance.size;
  const auto j_size = static_cast<int>(instance.triples.size());
  const int num_players = 2 * i_size + j_size;
  std::vector<int> thresholds(static_cast<std::size_t>(num_players) * j_size, 1);
  for (int m = 0; m < j_size; ++m) {
    const Triple& t = instance.triples[m];
    const int members[] = {t.x - 1, i_size + t.y - 1, 2 * i_size + t.z - 1};
    for (int player : members) {
      thresholds[static_cast<std::size_t>(player) * j_size + m] = 3;
    }
  }
  return Game(num_players, j_size, std::move(thresholds));
}

int MatchingTargetWelfare(const ThreeDmInstance& instance) {
  return 2 * instance.size + static_cast<int>(instance.triples.size());
}

bool DecideMatchingViaGame(const ThreeDmInstance& instance, const OptimumOracle& oracle) {
  const Game game = Reduce3dm(instance);
  const int optimum = oracle ? oracle(game) : BruteForceOptimum(game, kReductionSearchBudget).welfare;
  return optimum == MatchingTargetWelfare(instance);
}

namespace {

bool ExtendMatching(const std::vector<Triple>& triples, std::size_t from, int needed,
                    std::vector<bool>& used_x, std::vector<bool>& used_y, std::vector<bool>& used_z) {
  if (needed == 0) return true;
  if (triples.size() - from < static_cast<std::size_t>(needed)) return false;
  for (std::size_t k = from; k < triples.size(); ++k) {
    const Triple& t = triples[k];
    if (used_x[t.x] || used_y[t.y] || used_z[t.z]) continue;
    used_x[t.x] = used_y[t.y] = used_z[t.z] = true;
    const bool found = ExtendMatching(triples, k + 1, needed - 1, used_x, used_y, used_z);
    used_x[t.x] = used_y[t.y] = used_z[t.z] = false;
    if (found) return true;
  }
  return false;
}

}  // namespace

bool BruteForce3dm(const ThreeDmInstance& instance) {
  ValidateInstance(instance);
  if (instance.triples.size() > static_cast<std::size_t>(kMaxBruteForceTriples)) {
    throw BudgetExceeded("brute-force 3DM limited to J <= " + std::to_string(kMaxBruteForceTriples) +
                         " triples, got " + std::to_string(instance.triples.size()));
  }
  const auto width = static_cast<std::size_t>(instance.size) + 1;
  std::vector<bool> used_x(width), used_y(width), used_z(width);
  return ExtendMatching(instance.triples, 0, instance.size, used_x, used_y, used_z);
}

ThreeDmInstance RandomThreeDmInstance(int size, int num_triples, InstanceKind kind,
                                      std::uint64_t seed) {
  if (size < 1 || num_triples < size) throw DomainError("need J >= I >= 1");
  const long long cube = static_cast<long long>(size) * size * size;
  const long long available = kind == InstanceKind::kBlocked ? cube - static_cast<long long>(size) * size : cube;
  if (kind == InstanceKind::kBlocked && size < 2) {
    throw DomainError("a blocked instance needs I >= 2");
  }
  if (num_triples > available) throw DomainError("not enough distinct triples for J");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(1, size);
  std::set<Triple> chosen;
  std::vector<Triple> triples;
  auto add = [&](const Triple& t) {
    if (chosen.insert(t).second) triples.push_back(t);
  };

  int excluded_x = 0;
  if (kind == InstanceKind::kPlanted) {
    std::vector<int> ys(size), zs(size);
    std::iota(ys.begin(), ys.end(), 1);
    std::iota(zs.begin(), zs.end(), 1);
    std::shuffle(ys.begin(), ys.end(), rng);
    std::shuffle(zs.begin(), zs.end(), rng);
    for (int i = 0; i < size; ++i) add({i + 1, ys[i], zs[i]});
  } else if (kind == InstanceKind::kBlocked) {
    excluded_x = coord(rng);
  }
  while (static_cast<int>(triples.size()) < num_triples) {
    Triple t{coord(rng), coord(rng), coord(rng)};
    if (t.x == excluded_x) continue;
    add(t);
  }
  std::shuffle(triples.begin(), triples.end(), rng);
  return ThreeDmInstance{size, std::move(triples)};
}

}  // namespace qos
