#pragma once

// Time-slotted simulation of the distributed channel-update protocol: in each
// slot every user that can improve contends, one contender wins and moves to a
// uniformly chosen best response, and everybody observes the broadcast.

#include <cstdint>
#include <vector>

#include "qos/dynamics.hpp"
#include "qos/game.hpp"
#include "qos/spatial.hpp"

namespace qos {

struct ScenarioConfig {
  int num_users = 50;
  double width_m = 100.0;
  double height_m = 100.0;
  double interference_range_m = 50.0;
  std::vector<double> channel_rates_mbps = {6.0, 9.0, 12.0, 18.0};
  double high_demand_fraction = 0.5;
  double low_demand_mbps = 0.125;
  double high_demand_mbps = 3.5;
  Contention mac = Contention::kTdma;
  // Row-major num_users x channels; empty means every channel is available.
  std::vector<std::uint8_t> availability;
  std::int64_t max_slots = 100000;
  std::uint64_t topology_seed = 1;
  std::uint64_t dynamics_seed = 1;
  // Optional backoff collision model: when the two earliest timers (uniform on
  // [0, 1], in units of the contention window) are within `guard_interval`,
  // the slot is wasted.
  bool collisions = false;
  double guard_interval = 0.0;
};

// Throws DomainError naming the offending field.
void ValidateScenario(const ScenarioConfig& config);

// Number of high-demand users: fraction * N rounded half up.
int HighDemandCount(int num_users, double fraction);

struct Scenario {
  ScenarioConfig config;
  RateSpec rates;
  std::vector<double> demands;
  std::vector<bool> high_demand;
  SpatialGame game;
};

Scenario BuildScenario(const ScenarioConfig& config);

struct SimulationOptions {
  std::uint64_t seed = 0;
  std::int64_t max_slots = 100000;
  bool collisions = false;
  double guard_interval = 0.0;
};

inline constexpr int kNoUpdater = -1;

struct SlotRecord {
  std::int64_t slot = 0;  // 1-based
  int updater = kNoUpdater;
  int from = 0;
  int to = 0;
  bool collision = false;
  // State after this slot's update; empty when no rate model is attached.
  std::vector<double> throughput;
  int satisfied_count = 0;
  bool converged = false;
};

struct SimulationResult {
  std::vector<SlotRecord> slots;
  Profile final_profile;
  bool converged = false;
  std::int64_t update_count = 0;
  std::int64_t collision_count = 0;
  int satisfied_count = 0;
  int welfare = 0;
  // Convergence time: slots including the final slot in which nobody contends.
  std::int64_t slot_count() const { return static_cast<std::int64_t>(slots.size()); }
};

// Per-user rate B^{x_n} g(I_n^{x_n}); zero for dormant users.
std::vector<double> Throughputs(const SpatialGame& sgame, const RateSpec& rates, const Profile& profile);

// Starts all-dormant. Throws InvariantViolation when max_slots pass without
// convergence or the update count exceeds 4N + 3N^2.
SimulationResult Simulate(const SpatialGame& sgame, const SimulationOptions& options,
                          const RateSpec* rates = nullptr);
SimulationResult Simulate(const Scenario& scenario);

struct RunSummary {
  std::uint64_t topology_seed = 0;
  std::uint64_t dynamics_seed = 0;
  bool converged = false;
  std::int64_t slots = 0;
  std::int64_t update_count = 0;
  int satisfied_count = 0;
  int welfare = 0;
  bool natural_equilibrium = false;  // every user satisfied or dormant, no one can move
};

struct ReplicationSummary {
  int reps = 0;
  double mean_satisfied = 0.0;
  int min_satisfied = 0;
  int max_satisfied = 0;
  double mean_slots = 0.0;
  double mean_updates = 0.0;
  std::vector<RunSummary> runs;
  std::vector<SimulationResult> results;  // filled only when keep_results
};

// Replication r uses topology seed base + r and dynamics seed base + r, so a
// single replication reproduces Simulate(BuildScenario(config)). Runs are
// distributed over worker threads; output order is by replication index.
ReplicationSummary Replicate(const ScenarioConfig& config, int reps, bool keep_results = false,
                             unsigned threads = 0);

}  // namespace qos
