#pragma once

// Asynchronous better-response dynamics with potential-function
// instrumentation. Everything here operates on SpatialGame; the ordinary game
// is the complete-graph case.

#include <cstdint>
#include <vector>

#include "qos/spatial.hpp"

namespace qos {

// Strategies in {0..C} that strictly improve n's utility, ascending.
std::vector<int> BetterResponses(const SpatialGame& sgame, const Profile& profile, int n);

// Utility-maximising strategies, kept only when they strictly improve on the
// current utility. Empty when n cannot improve.
std::vector<int> BestResponseSet(const SpatialGame& sgame, const Profile& profile, int n);

bool CanImprove(const SpatialGame& sgame, const Profile& profile, int n);
bool IsPureNash(const SpatialGame& sgame, const Profile& profile);

// Twice the potential:
//   2 * [ sum of T_n^{x_n} over active n
//         - sum_c (#edges inside channel c + #users of c / 2) ].
// Every better-response update raises it by at least 1.
std::int64_t Potential2(const SpatialGame& sgame, const Profile& profile);

// Maximum number of better-response updates before a pure Nash equilibrium
// is reached: 4N + 3N^2.
std::int64_t UpdateBound(int num_players);

enum class Scheduler {
  kRoundRobin,     // cycle through players, skipping those that cannot improve
  kUniformRandom,  // uniform over players that can improve
};

enum class ChoiceRule {
  kUniform,       // uniform over the candidate set
  kLowestIndex,   // smallest strategy in the candidate set
};

struct DynamicsOptions {
  Scheduler scheduler = Scheduler::kUniformRandom;
  ChoiceRule choice = ChoiceRule::kUniform;
  // Candidates are the best-response set by default; when set, any better
  // response may be taken (adversarial testing).
  bool any_better_response = false;
  std::uint64_t seed = 0;
};

struct UpdateEvent {
  std::int64_t step = 0;  // 1-based
  int player = 0;
  int from = 0;
  int to = 0;
  int utility_before = 0;
  int utility_after = 0;
  std::int64_t potential2_after = 0;
};

struct Trace {
  Profile initial_profile;
  std::int64_t initial_potential2 = 0;
  std::vector<UpdateEvent> events;
  Profile final_profile;
  bool converged = false;
};

// Runs updates until no player can improve. Throws InvariantViolation if the
// potential fails to rise by >= 1 on some update or the update count exceeds
// UpdateBound(N).
Trace RunBetterResponse(const SpatialGame& sgame, const Profile& initial,
                        const DynamicsOptions& options = {});

}  // namespace qos
