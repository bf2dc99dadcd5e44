#include "qos/dynamics.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "qos/errors.hpp"

namespace qos {
namespace {

std::string ProfileString(const Profile& profile) {
  std::string out = "(";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(profile[i]);
  }
  return out + ")";
}

int PickIndex(std::mt19937_64& rng, std::size_t size) {
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  return static_cast<int>(pick(rng));
}

}  // namespace

std::vector<int> BetterResponses(const SpatialGame& sgame, const Profile& profile, int n) {
  const int current = SpatialUtility(sgame, profile, n);
  std::vector<int> out;
  for (int s = 0; s <= sgame.num_channels(); ++s) {
    if (s != profile[n] && SpatialUtilityIf(sgame, profile, n, s) > current) out.push_back(s);
  }
  return out;
}

std::vector<int> BestResponseSet(const SpatialGame& sgame, const Profile& profile, int n) {
  const int current = SpatialUtility(sgame, profile, n);
  std::vector<int> utilities(sgame.num_channels() + 1);
  int best = current;
  for (int s = 0; s <= sgame.num_channels(); ++s) {
    utilities[s] = s == profile[n] ? current : SpatialUtilityIf(sgame, profile, n, s);
    best = std::max(best, utilities[s]);
  }
  std::vector<int> out;
  if (best <= current) return out;
  for (int s = 0; s <= sgame.num_channels(); ++s) {
    if (utilities[s] == best) out.push_back(s);
  }
  return out;
}

bool CanImprove(const SpatialGame& sgame, const Profile& profile, int n) {
  const int current = SpatialUtility(sgame, profile, n);
  if (current == 1) return false;
  if (current == -1) return true;  // dormancy is always strictly better
  for (int c = 1; c <= sgame.num_channels(); ++c) {
    if (SpatialUtilityIf(sgame, profile, n, c) == 1) return true;
  }
  return false;
}

bool IsPureNash(const SpatialGame& sgame, const Profile& profile) {
  for (int n = 0; n < sgame.num_players(); ++n) {
    if (CanImprove(sgame, profile, n)) return false;
  }
  return true;
}

std::int64_t Potential2(const SpatialGame& sgame, const Profile& profile) {
  std::int64_t thresholds = 0;
  std::int64_t active = 0;
  for (int n = 0; n < sgame.num_players(); ++n) {
    if (profile[n] != kDormant) {
      thresholds += sgame.threshold(n, profile[n]);
      ++active;
    }
  }
  std::int64_t same_channel_edges = 0;
  for (const auto& [a, b] : sgame.graph().edges()) {
    if (profile[a] != kDormant && profile[a] == profile[b]) ++same_channel_edges;
  }
  return 2 * thresholds - 2 * same_channel_edges - active;
}

std::int64_t UpdateBound(int num_players) {
  const std::int64_t n = num_players;
  return 4 * n + 3 * n * n;
}

Trace RunBetterResponse(const SpatialGame& sgame, const Profile& initial,
                        const DynamicsOptions& options) {
  ValidateProfile(sgame.game(), initial);
  const int num_players = sgame.num_players();
  const std::int64_t bound = UpdateBound(num_players);
  std::mt19937_64 rng(options.seed);

  Trace trace;
  trace.initial_profile = initial;
  trace.initial_potential2 = Potential2(sgame, initial);

  Profile x = initial;
  std::int64_t potential = trace.initial_potential2;
  int cursor = 0;  // round-robin position
  std::vector<int> movers;
  movers.reserve(num_players);

  while (true) {
    int player = -1;
    if (options.scheduler == Scheduler::kRoundRobin) {
      for (int k = 0; k < num_players; ++k) {
        const int n = (cursor + k) % num_players;
        if (CanImprove(sgame, x, n)) {
          player = n;
          break;
        }
      }
    } else {
      movers.clear();
      for (int n = 0; n < num_players; ++n) {
        if (CanImprove(sgame, x, n)) movers.push_back(n);
      }
      if (!movers.empty()) player = movers[PickIndex(rng, movers.size())];
    }
    if (player < 0) break;

    const auto candidates = options.any_better_response ? BetterResponses(sgame, x, player)
                                                        : BestResponseSet(sgame, x, player);
    const int to = options.choice == ChoiceRule::kLowestIndex
                       ? candidates.front()
                       : candidates[PickIndex(rng, candidates.size())];

    UpdateEvent event;
    event.step = static_cast<std::int64_t>(trace.events.size()) + 1;
    event.player = player;
    event.from = x[player];
    event.to = to;
    event.utility_before = SpatialUtility(sgame, x, player);
    x[player] = to;
    event.utility_after = SpatialUtility(sgame, x, player);
    event.potential2_after = Potential2(sgame, x);

    if (event.utility_after <= event.utility_before) {
      throw InvariantViolation("update of player " + std::to_string(player) +
                               " is not a better response at " + ProfileString(x));
    }
    if (event.potential2_after < potential + 1) {
      throw InvariantViolation("potential did not rise: 2phi " + std::to_string(potential) +
                               " -> " + std::to_string(event.potential2_after) + " at step " +
                               std::to_string(event.step));
    }
    if (event.step > bound) {
      throw InvariantViolation("update count exceeded 4N + 3N^2 = " + std::to_string(bound));
    }
    potential = event.potential2_after;
    trace.events.push_back(event);
    cursor = (player + 1) % num_players;
  }

  trace.final_profile = std::move(x);
  trace.converged = true;
  return trace;
}

}  // namespace qos
