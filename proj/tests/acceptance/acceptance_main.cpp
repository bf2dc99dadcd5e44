// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; extra
// lines starting with "  info:" carry diagnostics.
//
//   acceptance                 run every criterion
//   acceptance --criterion K   run criterion K only

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "oracle.hpp"
#include "qos/dynamics.hpp"
#include "qos/errors.hpp"
#include "qos/hardness.hpp"
#include "qos/simkit.hpp"
#include "qos/solvers.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

// ---- shared corpus for criteria 1 and 2 -------------------------------------

constexpr int kDynamicsGames = 1000;
constexpr std::uint64_t kDynamicsCorpusSeed = 20140101;

struct DynamicsCase {
  oracle::Matrix thresholds;
  int channels = 1;
  qos::InterferenceGraph graph{1, {}};
  qos::Profile initial;
  qos::DynamicsOptions options;
};

DynamicsCase MakeDynamicsCase(std::mt19937_64& rng) {
  DynamicsCase c;
  const int n = std::uniform_int_distribution<int>(1, 15)(rng);
  c.channels = std::uniform_int_distribution<int>(1, 4)(rng);
  c.thresholds = oracle::RandomMatrix(rng, n, c.channels, 0, n + 1);
  c.graph = qos::RandomGraph(n, std::uniform_real_distribution<double>(0.0, 1.0)(rng), rng());
  c.initial.resize(n);
  for (auto& s : c.initial) s = std::uniform_int_distribution<int>(0, c.channels)(rng);
  c.options.scheduler = rng() % 2 ? qos::Scheduler::kRoundRobin : qos::Scheduler::kUniformRandom;
  c.options.choice = rng() % 2 ? qos::ChoiceRule::kUniform : qos::ChoiceRule::kLowestIndex;
  c.options.any_better_response = rng() % 2 == 0;
  c.options.seed = rng();
  return c;
}

template <typename F>
void ForEachDynamicsCase(F&& f) {
  std::mt19937_64 rng(kDynamicsCorpusSeed);
  for (int k = 0; k < kDynamicsGames; ++k) f(MakeDynamicsCase(rng));
}

Outcome ConvergenceBound() {
  int runs = 0, violations = 0;
  std::int64_t max_ratio_num = 0, max_ratio_den = 1;
  ForEachDynamicsCase([&](const DynamicsCase& c) {
    ++runs;
    const int n = static_cast<int>(c.thresholds.size());
    const qos::SpatialGame sg(qos::Game::FromRows(c.thresholds), c.graph);
    try {
      const auto trace = qos::RunBetterResponse(sg, c.initial, c.options);
      const auto steps = static_cast<std::int64_t>(trace.events.size());
      const bool pne = oracle::IsPne(c.thresholds, oracle::ClosedAdjacency(c.graph), trace.final_profile, c.channels);
      if (!trace.converged || !pne || !qos::IsPureNash(sg, trace.final_profile) || steps > qos::UpdateBound(n)) {
        ++violations;
      }
      if (steps * max_ratio_den > max_ratio_num * qos::UpdateBound(n)) {
        max_ratio_num = steps;
        max_ratio_den = qos::UpdateBound(n);
      }
    } catch (const qos::InvariantViolation&) {
      ++violations;
    }
  });
  Outcome o;
  o.pass = runs >= 1000 && violations == 0;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(violations) + " violations";
  o.info.push_back("largest updates/bound ratio: " + std::to_string(max_ratio_num) + "/" +
                   std::to_string(max_ratio_den));
  return o;
}

Outcome PotentialMonotonicity() {
  int runs = 0, events = 0, step_violations = 0, range_violations = 0, corrected_violations = 0;
  std::int64_t lowest = 0;
  ForEachDynamicsCase([&](const DynamicsCase& c) {
    ++runs;
    const std::int64_t n = static_cast<std::int64_t>(c.thresholds.size());
    const qos::SpatialGame sg(qos::Game::FromRows(c.thresholds), c.graph);
    const auto adj = oracle::ClosedAdjacency(c.graph);
    // Recompute every potential independently instead of trusting the trace.
    qos::Profile x = c.initial;
    std::vector<std::int64_t> values{oracle::Potential2(c.thresholds, adj, x)};
    try {
      const auto trace = qos::RunBetterResponse(sg, c.initial, c.options);
      for (const auto& e : trace.events) {
        ++events;
        x[e.player] = e.to;
        values.push_back(oracle::Potential2(c.thresholds, adj, x));
        if (values.back() != e.potential2_after) ++step_violations;
      }
    } catch (const qos::InvariantViolation&) {
      ++step_violations;
    }
    for (std::size_t k = 1; k < values.size(); ++k) {
      if (values[k] - values[k - 1] < 1) ++step_violations;
    }
    bool out_of_range = false, out_of_corrected = false;
    for (auto v : values) {
      lowest = std::min(lowest, v);
      if (v < -2 * n || v > 2 * n + 3 * n * n) out_of_range = true;
      if (v < -n * n || v > 2 * n + 3 * n * n) out_of_corrected = true;
    }
    range_violations += out_of_range;
    corrected_violations += out_of_corrected;
  });
  Outcome o;
  o.pass = runs >= 1000 && step_violations == 0 && range_violations == 0;
  o.detail = std::to_string(runs) + " traces, " + std::to_string(events) + " events, " +
             std::to_string(step_violations) + " step violations, " + std::to_string(range_violations) +
             " traces leaving [-2N, 2N + 3N^2]";
  o.info.push_back("lowest 2*Phi observed: " + std::to_string(lowest));
  o.info.push_back("traces leaving [-N^2, 2N + 3N^2]: " + std::to_string(corrected_violations));
  return o;
}

// ---- centralised solvers ----------------------------------------------------

Outcome Algorithm1Exactness() {
  const qos::Game fig3 = qos::Game::HomogeneousChannels(std::vector<int>{5, 5, 3, 3, 3, 3, 2, 2, 1, 1}, 3);
  const qos::Profile golden = qos::Algorithm1(fig3);
  const bool golden_ok =
      golden == qos::Profile{1, 1, 1, 2, 2, 2, 3, 3, 0, 0} && qos::SatisfiedCount(fig3, golden) == 8;

  std::mt19937_64 rng(5005);
  int games = 0, violations = 0;
  for (; games < 500; ++games) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int c = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<int> t(n);
    for (auto& v : t) v = std::uniform_int_distribution<int>(0, n + 1)(rng);
    oracle::Matrix rows;
    for (int v : t) rows.emplace_back(c, v);
    const qos::Game g = qos::Game::FromRows(rows);
    const qos::Profile x = qos::Algorithm1(g);
    const int w = qos::Welfare(g, x);
    const bool ok = w == qos::BruteForceOptimum(g).welfare && w == oracle::OptimumWelfare(rows, c) &&
                    qos::IsPureNash(qos::SpatialGame(g), x) && oracle::IsPne(rows, oracle::FullAdjacency(n), x, c);
    violations += !ok;
  }
  Outcome o;
  o.pass = golden_ok && violations == 0;
  o.detail = std::to_string(games) + " games, " + std::to_string(violations) + " violations, ten-player golden " +
             (golden_ok ? "ok" : "WRONG");
  return o;
}

Outcome HomogeneousUsersEquivalence() {
  std::mt19937_64 rng(4004);
  int games = 0, violations = 0;
  std::int64_t profiles = 0;
  for (; games < 500; ++games) {
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    const int c = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<int> per_channel(c);
    for (auto& v : per_channel) v = std::uniform_int_distribution<int>(0, n + 1)(rng);
    const qos::Game g = qos::Game::HomogeneousUsers(n, per_channel);
    const auto rows = g.rows();
    const auto adj = oracle::FullAdjacency(n);
    const int optimum = oracle::OptimumWelfare(rows, c);
    oracle::ForEachProfile(n, c, [&](const qos::Profile& x) {
      ++profiles;
      const auto check = qos::VerifyHomogeneousUsers(g, x, optimum);
      const bool pne = oracle::IsPne(rows, adj, x, c);
      const bool agree = check.is_pne == check.is_canonical_count && check.is_pne == check.is_optimum &&
                         check.is_pne == pne && check.is_optimum == (oracle::Welfare(rows, adj, x) == optimum);
      violations += !agree;
    });
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(games) + " games, " + std::to_string(profiles) + " profiles, " +
             std::to_string(violations) + " violations";
  return o;
}

Outcome PoaBound() {
  const auto e = qos::PriceOfAnarchy(qos::Game::HomogeneousChannels(std::vector<int>{2, 2, 4, 4, 4, 4}, 2));
  const auto pne = qos::EnumeratePne(qos::Game::HomogeneousChannels(std::vector<int>{2, 2, 4, 4, 4, 4}, 2));
  const bool golden_ok = e.optimum_welfare == 6 &&
                         std::find(pne.begin(), pne.end(), qos::Profile{0, 0, 1, 1, 2, 2}) != pne.end() &&
                         oracle::Welfare(qos::Game::HomogeneousChannels(std::vector<int>{2, 2, 4, 4, 4, 4}, 2).rows(),
                                         oracle::FullAdjacency(6), {0, 0, 1, 1, 2, 2}) == 4;

  std::mt19937_64 rng(3003);
  int games = 0, violations = 0;
  qos::Rational tightest(0);
  for (; games < 500; ++games) {
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    const int c = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto t = oracle::RandomMatrix(rng, n, c, 1, n + 1);
    const auto report = qos::PriceOfAnarchy(qos::Game::FromRows(t));
    int tmax = 0, tmin = n + 1;
    for (const auto& row : t) {
      for (int v : row) {
        tmax = std::max(tmax, v);
        tmin = std::min(tmin, v);
      }
    }
    const qos::Rational bound = std::min(qos::Rational(n), qos::Rational(tmax, tmin));
    const bool ok = report.bound == bound && report.poa <= bound &&
                    report.optimum_welfare == oracle::OptimumWelfare(t, c);
    violations += !ok;
    const qos::Rational slack(report.poa.num() * bound.den(), report.poa.den() * bound.num());
    tightest = std::max(tightest, slack);
  }
  Outcome o;
  o.pass = golden_ok && violations == 0;
  o.detail = std::to_string(games) + " games, " + std::to_string(violations) + " violations, six-player golden " +
             (golden_ok ? "ok" : "WRONG");
  o.info.push_back("largest poa/bound: " + tightest.str() + "; six-player poa " + e.poa.str() + " vs bound " +
                   e.bound.str());
  return o;
}

Outcome ReductionIff() {
  std::mt19937_64 rng(2002);
  int instances = 0, violations = 0, matchable = 0;
  for (; instances < 200; ++instances) {
    const int i = std::uniform_int_distribution<int>(1, 3)(rng);
    const int j = std::uniform_int_distribution<int>(i, std::min(5, i * i * i))(rng);
    auto kind = static_cast<qos::InstanceKind>(instances % 3);
    if (kind == qos::InstanceKind::kBlocked && (i < 2 || j > (i - 1) * i * i)) kind = qos::InstanceKind::kUniform;
    const auto inst = qos::RandomThreeDmInstance(i, j, kind, rng());
    const auto g = qos::Reduce3dm(inst);
    const bool via_game = qos::DecideMatchingViaGame(inst);
    const bool direct = qos::BruteForce3dm(inst);
    matchable += direct;
    const bool ok = via_game == direct && g.num_channels() == j && g.num_players() == 2 * i + j;
    violations += !ok;
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(instances) + " instances (" + std::to_string(matchable) + " matchable), " +
             std::to_string(violations) + " violations";
  return o;
}

Outcome RoundRobinSatisfiesAll() {
  std::mt19937_64 rng(6006);
  int games = 0, violations = 0;
  for (; games < 200; ++games) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const int c = std::uniform_int_distribution<int>(1, 6)(rng);
    const int floor_t = (n + c - 1) / c;
    const auto t = oracle::RandomMatrix(rng, n, c, floor_t, n + 1);
    const qos::Profile x = qos::RoundRobinProfile(n, c);
    const auto adj = oracle::FullAdjacency(n);
    bool all = true;
    for (int p = 0; p < n; ++p) all = all && oracle::Utility(t, adj, x, p) == 1;
    violations += !(all && qos::SatisfiedCount(qos::Game::FromRows(t), x) == n);
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(games) + " games, " + std::to_string(violations) + " violations";
  return o;
}

// ---- simulation trends ------------------------------------------------------

std::vector<double> AverageRanks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return rank;
}

// Pearson correlation of average ranks; NaN when either series is constant.
double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = AverageRanks(a), rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nan("");
  return sab / std::sqrt(saa * sbb);
}

// Mean satisfied count over a demand-fraction sweep.
std::vector<double> FractionSweep(int num_users, int reps, const std::function<void(const qos::ReplicationSummary&)>& tally) {
  std::vector<double> satisfied;
  for (int k = 0; k <= 10; ++k) {
    qos::ScenarioConfig cfg;
    cfg.num_users = num_users;
    cfg.channel_rates_mbps = {6, 9, 12, 18};
    cfg.high_demand_fraction = k / 10.0;
    const auto s = qos::Replicate(cfg, reps);
    if (tally) tally(s);
    satisfied.push_back(s.mean_satisfied);
  }
  return satisfied;
}

Outcome SimulationTrends() {
  constexpr int kReps = 20;
  constexpr double kRhoMax = -0.8;
  int runs = 0, unnatural = 0;
  auto tally = [&](const qos::ReplicationSummary& s) {
    for (const auto& r : s.runs) {
      ++runs;
      unnatural += !(r.converged && r.natural_equilibrium);
    }
  };

  std::vector<double> fractions;
  for (int k = 0; k <= 10; ++k) fractions.push_back(k / 10.0);
  const std::vector<double> satisfied = FractionSweep(10, kReps, tally);
  const double rho = Spearman(fractions, satisfied);
  int rises = 0;
  for (std::size_t k = 1; k < satisfied.size(); ++k) rises += satisfied[k] > satisfied[k - 1];

  std::vector<double> slots;
  for (int n : {5, 10, 15, 20}) {
    qos::ScenarioConfig cfg;
    cfg.num_users = n;
    const auto s = qos::Replicate(cfg, kReps);
    tally(s);
    slots.push_back(s.mean_slots);
  }
  const bool slots_monotone = std::is_sorted(slots.begin(), slots.end());

  Outcome o;
  o.pass = rho <= kRhoMax && slots_monotone && unnatural == 0;
  std::ostringstream d;
  d << "(a) spearman rho ";
  if (std::isnan(rho)) {
    d << "undefined, mean satisfied is constant";
  } else {
    d << rho;
  }
  d << " (need <= " << kRhoMax << "), (b) mean slots over N=5,10,15,20 "
    << (slots_monotone ? "non-decreasing" : "NOT monotone") << ", (c) " << unnatural << " of " << runs
    << " runs not natural equilibria";
  o.detail = d.str();
  std::ostringstream a, b;
  a << "mean satisfied by fraction 0..1:";
  for (double v : satisfied) a << ' ' << v;
  a << " (" << rises << " upticks)";
  b << "mean slots by N:";
  for (double v : slots) b << ' ' << v;
  // Same sweep at the full 50-user scale, for comparison only.
  const std::vector<double> wide = FractionSweep(50, kReps, {});
  std::ostringstream w;
  w << "reference N=50 sweep, rho " << Spearman(fractions, wide) << ":";
  for (double v : wide) w << ' ' << v;
  o.info = {a.str(), b.str(), w.str()};
  return o;
}

// ---- determinism ------------------------------------------------------------

Outcome Determinism() {
  harness::ScratchDir dir("qos_acceptance_det");
  std::vector<std::string> mismatches;
  int compared = 0;
  auto same = [&](const std::string& label, const std::string& a, const std::string& b) {
    ++compared;
    if (a.empty() || a != b) mismatches.push_back(label);
  };

  // Dynamics with the random scheduler on a random spatial game.
  std::mt19937_64 rng(9009);
  std::ostringstream game;
  const int n = 12, c = 3;
  const auto t = oracle::RandomMatrix(rng, n, c, 0, n + 1);
  const auto graph = qos::RandomGraph(n, 0.5, 77);
  game << R"({"schema_version":1,"n_players":)" << n << R"(,"n_channels":)" << c << R"(,"thresholds":[)";
  for (int p = 0; p < n; ++p) {
    game << (p ? "," : "") << '[';
    for (int k = 0; k < c; ++k) game << (k ? "," : "") << t[p][k];
    game << ']';
  }
  game << R"(],"graph":{"n_vertices":)" << n << R"(,"edges":[)";
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    game << (e ? "," : "") << '[' << graph.edges()[e].first << ',' << graph.edges()[e].second << ']';
  }
  game << "]}}";
  const auto game_path = dir.write("game.json", game.str());
  const auto init_path = dir.write("init.json", "[1,1,1,1,2,2,2,2,3,3,3,3]");
  for (int run = 0; run < 2; ++run) {
    const auto r = harness::RunCli({"dynamics", game_path, "--initial", init_path, "--seed", "12345", "--any-better",
                                    "--csv", dir.file("trace_" + std::to_string(run) + ".csv")});
    if (r.code != 0) mismatches.push_back("dynamics exit " + std::to_string(r.code));
  }
  same("dynamics trace csv", harness::Slurp(dir.file("trace_0.csv")), harness::Slurp(dir.file("trace_1.csv")));
  const auto stdout_a = harness::RunCli({"dynamics", game_path, "--seed", "5"}).out;
  const auto stdout_b = harness::RunCli({"dynamics", game_path, "--seed", "5"}).out;
  same("dynamics stdout csv", stdout_a, stdout_b);

  // Simulation sweep, once single-threaded and once on four workers.
  const auto scenario = dir.write(
      "scenario.json",
      R"({"schema_version":1,"num_users":8,"topology_seed":31,"dynamics_seed":47,)"
      R"("sweep":{"field":"high_demand_fraction","values":[0,0.5,1]}})");
  const auto a = harness::RunCli({"simulate", scenario, "--reps", "4", "--threads", "1", "--out-dir", dir.file("a")});
  const auto b = harness::RunCli({"simulate", scenario, "--reps", "4", "--threads", "4", "--out-dir", dir.file("b")});
  if (a.code != 0 || b.code != 0) mismatches.push_back("simulate exit code");
  for (const auto& entry : std::filesystem::directory_iterator(dir.file("a"))) {
    if (entry.path().extension() != ".csv") continue;
    const auto name = entry.path().filename().string();
    same("simulate " + name, harness::Slurp(entry.path().string()), harness::Slurp(dir.file("b/" + name)));
  }

  Outcome o;
  o.pass = mismatches.empty() && compared >= 14;
  o.detail = std::to_string(compared) + " CSV outputs compared, " + std::to_string(mismatches.size()) + " differ";
  for (const auto& m : mismatches) o.info.push_back("differs: " + m);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "convergence bound", ConvergenceBound},
      {2, "potential monotonicity", PotentialMonotonicity},
      {3, "algorithm 1 exactness", Algorithm1Exactness},
      {4, "homogeneous-user equivalence", HomogeneousUsersEquivalence},
      {5, "PoA bound", PoaBound},
      {6, "reduction iff", ReductionIff},
      {7, "round robin satisfies all", RoundRobinSatisfiesAll},
      {8, "simulation trends", SimulationTrends},
      {9, "CLI determinism", Determinism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: " << argv[0] << " [--criterion K]\n";
      return 2;
    }
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << "\n";
    for (const auto& line : o.info) std::cout << "  info: " << line << "\n";
    failed += !o.pass;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failed ? 1 : 0;
}
