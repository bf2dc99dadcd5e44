#include "qos/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "qos/errors.hpp"

namespace qos {
namespace {

void FieldError(const std::string& field, const std::string& message) {
  throw DomainError("scenario field '" + field + "': " + message);
}

RateSpec MakeRates(const ScenarioConfig& config) {
  const int n = config.num_users;
  const auto c = static_cast<int>(config.channel_rates_mbps.size());
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(n) * c);
  for (int u = 0; u < n; ++u) {
    rates.insert(rates.end(), config.channel_rates_mbps.begin(), config.channel_rates_mbps.end());
  }
  std::vector<std::uint8_t> avail = config.availability;
  if (avail.empty()) avail.assign(rates.size(), 1);
  std::vector<double> table;
  if (config.mac == Contention::kTabulated) FieldError("mac", "tabulated contention not supported in scenarios");
  return RateSpec(n, c, std::move(rates), std::move(avail), config.mac, std::move(table));
}

}  // namespace

void ValidateScenario(const ScenarioConfig& config) {
  if (config.num_users < 1) FieldError("num_users", "must be >= 1");
  if (!(config.width_m > 0.0)) FieldError("width_m", "must be positive");
  if (!(config.height_m > 0.0)) FieldError("height_m", "must be positive");
  if (!(config.interference_range_m >= 0.0)) FieldError("interference_range_m", "must be >= 0");
  if (config.channel_rates_mbps.empty()) FieldError("channel_rates_mbps", "need at least one channel");
  for (double r : config.channel_rates_mbps) {
    if (!(r > 0.0)) FieldError("channel_rates_mbps", "rates must be positive");
  }
  if (!(config.high_demand_fraction >= 0.0 && config.high_demand_fraction <= 1.0)) {
    FieldError("high_demand_fraction", "must lie in [0, 1]");
  }
  if (!(config.low_demand_mbps >= 0.0)) FieldError("low_demand_mbps", "must be >= 0");
  if (!(config.high_demand_mbps >= 0.0)) FieldError("high_demand_mbps", "must be >= 0");
  const auto cells = static_cast<std::size_t>(config.num_users) * config.channel_rates_mbps.size();
  if (!config.availability.empty() && config.availability.size() != cells) {
    FieldError("availability", "expected " + std::to_string(cells) + " entries (users x channels)");
  }
  for (auto a : config.availability) {
    if (a > 1) FieldError("availability", "entries must be 0 or 1");
  }
  if (config.max_slots < 1) FieldError("max_slots", "must be >= 1");
  if (config.collisions && !(config.guard_interval >= 0.0 && config.guard_interval <= 1.0)) {
    FieldError("guard_interval", "must lie in [0, 1]");
  }
}

int HighDemandCount(int num_users, double fraction) {
  return static_cast<int>(std::floor(fraction * num_users + 0.5));
}

Scenario BuildScenario(const ScenarioConfig& config) {
  ValidateScenario(config);
  const int n = config.num_users;
  RateSpec rates = MakeRates(config);

  // Users are ranked by a seeded permutation and the first k are high demand,
  // so raising the fraction only ever adds high-demand users.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.topology_seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  const int high = HighDemandCount(n, config.high_demand_fraction);
  std::vector<bool> is_high(n, false);
  for (int k = 0; k < high; ++k) is_high[order[k]] = true;

  std::vector<double> demands(n);
  for (int u = 0; u < n; ++u) demands[u] = is_high[u] ? config.high_demand_mbps : config.low_demand_mbps;

  Game game = BuildGame(rates, demands);
  InterferenceGraph graph = RandomGeometricGraph(n, config.width_m, config.height_m,
                                                 config.interference_range_m, config.topology_seed);
  return Scenario{config, std::move(rates), std::move(demands), std::move(is_high),
                  SpatialGame(std::move(game), std::move(graph))};
}

std::vector<double> Throughputs(const SpatialGame& sgame, const RateSpec& rates, const Profile& profile) {
  std::vector<double> out(sgame.num_players(), 0.0);
  for (int n = 0; n < sgame.num_players(); ++n) {
    const int c = profile[n];
    if (c != kDormant) out[n] = Rate(rates, n, c, LocalCongestion(sgame, profile, n, c));
  }
  return out;
}

SimulationResult Simulate(const SpatialGame& sgame, const SimulationOptions& options, const RateSpec* rates) {
  if (options.max_slots < 1) throw DomainError("max_slots must be >= 1");
  const int num_players = sgame.num_players();
  const std::int64_t bound = UpdateBound(num_players);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> backoff(0.0, 1.0);

  SimulationResult result;
  Profile x(num_players, kDormant);
  std::vector<int> contenders;
  std::vector<std::pair<double, int>> timers;

  auto record = [&](SlotRecord slot) {
    slot.slot = result.slot_count() + 1;
    if (rates) slot.throughput = Throughputs(sgame, *rates, x);
    slot.satisfied_count = SpatialSatisfiedCount(sgame, x);
    result.slots.push_back(std::move(slot));
  };

  while (true) {
    if (result.slot_count() >= options.max_slots) {
      throw InvariantViolation("no convergence within max_slots = " + std::to_string(options.max_slots));
    }
    contenders.clear();
    for (int n = 0; n < num_players; ++n) {
      if (CanImprove(sgame, x, n)) contenders.push_back(n);
    }
    if (contenders.empty()) {
      SlotRecord slot;
      slot.converged = true;
      record(std::move(slot));
      result.converged = true;
      break;
    }

    int winner;
    if (options.collisions) {
      timers.clear();
      for (int n : contenders) timers.emplace_back(backoff(rng), n);
      std::sort(timers.begin(), timers.end());
      if (timers.size() > 1 && timers[1].first - timers[0].first <= options.guard_interval) {
        SlotRecord slot;
        slot.collision = true;
        ++result.collision_count;
        record(std::move(slot));
        continue;
      }
      winner = timers[0].second;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, contenders.size() - 1);
      winner = contenders[pick(rng)];
    }

    const auto best = BestResponseSet(sgame, x, winner);
    std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
    const int to = best[pick(rng)];
    const int before = SpatialUtility(sgame, x, winner);
    SlotRecord slot;
    slot.updater = winner;
    slot.from = x[winner];
    slot.to = to;
    x[winner] = to;
    if (SpatialUtility(sgame, x, winner) <= before) {
      throw InvariantViolation("slot update of user " + std::to_string(winner) + " did not improve its utility");
    }
    if (++result.update_count > bound) {
      throw InvariantViolation("update count exceeded 4N + 3N^2 = " + std::to_string(bound));
    }
    record(std::move(slot));
  }

  result.final_profile = x;
  result.satisfied_count = SpatialSatisfiedCount(sgame, x);
  result.welfare = SpatialWelfare(sgame, x);
  return result;
}

SimulationResult Simulate(const Scenario& scenario) {
  SimulationOptions options;
  options.seed = scenario.config.dynamics_seed;
  options.max_slots = scenario.config.max_slots;
  options.collisions = scenario.config.collisions;
  options.guard_interval = scenario.config.guard_interval;
  return Simulate(scenario.game, options, &scenario.rates);
}

ReplicationSummary Replicate(const ScenarioConfig& config, int reps, bool keep_results, unsigned threads) {
  if (reps < 1) throw DomainError("need at least one replication");
  ValidateScenario(config);

  ReplicationSummary summary;
  summary.reps = reps;
  summary.runs.resize(reps);
  if (keep_results) summary.results.resize(reps);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int r = next++; r < reps && !failed; r = next++) {
      try {
        ScenarioConfig cfg = config;
        cfg.topology_seed = config.topology_seed + static_cast<std::uint64_t>(r);
        cfg.dynamics_seed = config.dynamics_seed + static_cast<std::uint64_t>(r);
        const Scenario scenario = BuildScenario(cfg);
        SimulationResult result = Simulate(scenario);
        RunSummary& run = summary.runs[r];
        run.topology_seed = cfg.topology_seed;
        run.dynamics_seed = cfg.dynamics_seed;
        run.converged = result.converged;
        run.slots = result.slot_count();
        run.update_count = result.update_count;
        run.satisfied_count = result.satisfied_count;
        run.welfare = result.welfare;
        run.natural_equilibrium = result.welfare == result.satisfied_count &&
                                  IsPureNash(scenario.game, result.final_profile);
        if (keep_results) summary.results[r] = std::move(result);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  summary.min_satisfied = summary.runs.front().satisfied_count;
  summary.max_satisfied = summary.runs.front().satisfied_count;
  double satisfied = 0.0, slots = 0.0, updates = 0.0;
  for (const auto& run : summary.runs) {
    satisfied += run.satisfied_count;
    slots += static_cast<double>(run.slots);
    updates += static_cast<double>(run.update_count);
    summary.min_satisfied = std::min(summary.min_satisfied, run.satisfied_count);
    summary.max_satisfied = std::max(summary.max_satisfied, run.satisfied_count);
  }
  summary.mean_satisfied = satisfied / reps;
  summary.mean_slots = slots / reps;
  summary.mean_updates = updates / reps;
  return summary;
}

}  // namespace qos
