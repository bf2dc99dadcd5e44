#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qos/dynamics.hpp"
#include "qos/errors.hpp"
#include "qos/hardness.hpp"
#include "qos/io.hpp"
#include "qos/simkit.hpp"
#include "qos/solvers.hpp"

namespace qos::cli {
namespace {

using io::Json;

std::string ProfileText(const Profile& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(x[i]);
  }
  return out + ")";
}

io::RunManifest Manifest(const std::string& subcommand, const std::string& config_path) {
  io::RunManifest m;
  m.subcommand = subcommand;
  m.config_path = config_path;
  m.timestamp = io::UtcTimestamp();
  return m;
}

void WriteJson(const std::string& path, const Json& doc) { io::WriteTextFile(path, doc.dump(2) + "\n"); }

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string game_path;
  std::string algorithm = "alg1";
  std::string out_path;
  std::uint64_t budget = kDefaultSearchBudget;
};

int Solve(const SolveArgs& args, std::ostream& out) {
  const Game game = io::GameFromJson(io::ReadJsonFile(args.game_path));
  Profile profile;
  std::string note;
  if (args.algorithm == "alg1") {
    profile = Algorithm1(game);
    note = "social optimum and pure Nash equilibrium (homogeneous channels)";
  } else if (args.algorithm == "round-robin") {
    profile = RoundRobinProfile(game.num_players(), game.num_channels());
    const int needed = (game.num_players() + game.num_channels() - 1) / game.num_channels();
    const bool hypothesis = game.has_homogeneous_channels() && game.min_threshold() >= needed;
    note = hypothesis ? "every user satisfied (homogeneous channels, T_n >= ceil(N/C) = " +
                            std::to_string(needed) + ")"
                      : "no all-satisfied guarantee: needs homogeneous channels with T_n >= ceil(N/C) = " +
                            std::to_string(needed);
  } else {
    const OptimumResult optimum = BruteForceOptimum(game, args.budget);
    profile = optimum.witness;
    note = "exact social optimum (lexicographically smallest maximiser)";
  }
  const int welfare = Welfare(game, profile);
  const int satisfied = SatisfiedCount(game, profile);
  const bool pne = IsPureNashComplete(game, profile);

  out << "algorithm: " << args.algorithm << "\n"
      << "profile: " << ProfileText(profile) << "\n"
      << "welfare: " << welfare << "\n"
      << "satisfied: " << satisfied << " of " << game.num_players() << "\n"
      << "pure_nash: " << (pne ? "yes" : "no") << "\n"
      << "note: " << note << "\n";

  if (!args.out_path.empty()) {
    auto manifest = Manifest("solve", args.game_path);
    manifest.outputs["profile"] = args.out_path;
    Json doc;
    doc["manifest"] = io::ManifestToJson(manifest);
    doc["algorithm"] = args.algorithm;
    doc["profile"] = io::ProfileToJson(profile);
    doc["welfare"] = welfare;
    doc["satisfied_count"] = satisfied;
    doc["is_pure_nash"] = pne;
    WriteJson(args.out_path, doc);
  }
  return kOk;
}

// ---- dynamics --------------------------------------------------------------

struct DynamicsArgs {
  std::string game_path;
  std::string initial_path;
  std::string scheduler = "random";
  std::string choice = "random";
  bool any_better = false;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string json_path;
};

int Dynamics(const DynamicsArgs& args, std::ostream& out) {
  const Json doc = io::ReadJsonFile(args.game_path);
  Game game = io::GameFromJson(doc);
  auto graph = io::GraphFromGameJson(doc);
  const SpatialGame sgame = graph ? SpatialGame(std::move(game), std::move(*graph)) : SpatialGame(std::move(game));

  Profile initial(sgame.num_players(), kDormant);
  if (!args.initial_path.empty()) initial = io::ProfileFromJson(io::ReadJsonFile(args.initial_path));
  ValidateProfile(sgame.game(), initial);

  DynamicsOptions options;
  options.scheduler = args.scheduler == "round-robin" ? Scheduler::kRoundRobin : Scheduler::kUniformRandom;
  options.choice = args.choice == "lowest" ? ChoiceRule::kLowestIndex : ChoiceRule::kUniform;
  options.any_better_response = args.any_better;
  options.seed = args.seed;
  const Trace trace = RunBetterResponse(sgame, initial, options);

  auto manifest = Manifest("dynamics", args.game_path);
  manifest.seeds["dynamics"] = args.seed;
  if (!args.csv_path.empty()) manifest.outputs["trace_csv"] = args.csv_path;
  if (!args.json_path.empty()) manifest.outputs["trace_json"] = args.json_path;

  std::ostringstream csv;
  csv << io::ManifestCsvComment(manifest);
  io::WriteTraceCsv(csv, trace);
  if (!args.csv_path.empty()) {
    io::WriteTextFile(args.csv_path, csv.str());
  } else if (args.json_path.empty()) {
    out << csv.str();
  }
  if (!args.json_path.empty()) {
    Json result = io::TraceToJson(trace);
    result["manifest"] = io::ManifestToJson(manifest);
    result["is_pure_nash"] = IsPureNash(sgame, trace.final_profile);
    result["update_bound"] = UpdateBound(sgame.num_players());
    WriteJson(args.json_path, result);
  }
  if (!args.csv_path.empty() || !args.json_path.empty()) {
    out << "updates: " << trace.events.size() << " (bound " << UpdateBound(sgame.num_players()) << ")\n"
        << "final_profile: " << ProfileText(trace.final_profile) << "\n"
        << "pure_nash: " << (IsPureNash(sgame, trace.final_profile) ? "yes" : "no") << "\n";
  }
  return kOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string game_path;
  std::string out_path;
  std::uint64_t budget = kDefaultSearchBudget;
};

int Analyze(const AnalyzeArgs& args, std::ostream& out) {
  const Game game = io::GameFromJson(io::ReadJsonFile(args.game_path));
  const PoaReport report = PriceOfAnarchy(game, args.budget);
  Json doc = io::PoaReportToJson(report);
  auto manifest = Manifest("analyze", args.game_path);
  if (!args.out_path.empty()) manifest.outputs["report"] = args.out_path;
  doc["manifest"] = io::ManifestToJson(manifest);
  if (!args.out_path.empty()) WriteJson(args.out_path, doc);
  out << doc.dump(2) << "\n";
  return kOk;
}

// ---- reduce-3dm ------------------------------------------------------------

struct ReduceArgs {
  std::string instance_path;
  std::string out_path;
  bool decide = true;
  std::uint64_t budget = kReductionSearchBudget;
};

int Reduce(const ReduceArgs& args, std::ostream& out) {
  const ThreeDmInstance instance = io::InstanceFromJson(io::ReadJsonFile(args.instance_path));
  const Game game = Reduce3dm(instance);
  auto manifest = Manifest("reduce-3dm", args.instance_path);
  if (!args.out_path.empty()) {
    manifest.outputs["game"] = args.out_path;
    Json game_doc = io::GameToJson(game);
    WriteJson(args.out_path, game_doc);
  }

  Json doc;
  doc["manifest"] = io::ManifestToJson(manifest);
  doc["I"] = instance.size;
  doc["J"] = instance.triples.size();
  doc["n_players"] = game.num_players();
  doc["n_channels"] = game.num_channels();
  doc["target_welfare"] = MatchingTargetWelfare(instance);
  if (args.out_path.empty()) doc["game"] = io::GameToJson(game);
  if (args.decide) {
    const OptimumResult optimum = BruteForceOptimum(game, args.budget);
    const bool via_game = optimum.welfare == MatchingTargetWelfare(instance);
    const bool direct = BruteForce3dm(instance);
    doc["optimum_welfare"] = optimum.welfare;
    doc["matching_via_game"] = via_game;
    doc["matching_brute_force"] = direct;
    doc["oracles_agree"] = via_game == direct;
    if (via_game != direct) {
      out << doc.dump(2) << "\n";
      throw InvariantViolation("reduction decision disagrees with the direct 3DM search");
    }
  }
  out << doc.dump(2) << "\n";
  return kOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string scenario_path;
  int reps = 20;
  std::string out_dir = "qos_sim_out";
  unsigned threads = 0;
  bool rep_csv = true;
};

std::string RepFileName(int point, int rep, bool sweep) {
  std::ostringstream name;
  if (sweep) name << "point_" << std::setw(2) << std::setfill('0') << point << "_";
  name << "rep_" << std::setw(3) << std::setfill('0') << rep << ".csv";
  return name.str();
}

int Simulate(const SimulateArgs& args, std::ostream& out) {
  if (args.reps < 1) throw DomainError("--reps must be >= 1");
  const Json doc = io::ReadJsonFile(args.scenario_path);
  const ScenarioConfig base = io::ScenarioFromJson(doc);

  // Optional sweep: {"field": "high_demand_fraction" | "num_users", "values": [..]}.
  std::string sweep_field;
  std::vector<double> sweep_values;
  if (auto it = doc.find("sweep"); it != doc.end()) {
    if (!it->is_object() || !it->contains("field") || !it->contains("values")) {
      throw DomainError("scenario field 'sweep': expected {\"field\": ..., \"values\": [...]}");
    }
    sweep_field = (*it)["field"].get<std::string>();
    if (sweep_field != "high_demand_fraction" && sweep_field != "num_users") {
      throw DomainError("scenario field 'sweep.field': must be \"high_demand_fraction\" or \"num_users\"");
    }
    sweep_values = (*it)["values"].get<std::vector<double>>();
    if (sweep_values.empty()) throw DomainError("scenario field 'sweep.values': must not be empty");
  }
  const bool sweeping = !sweep_field.empty();
  if (!sweeping) sweep_values = {0.0};

  std::filesystem::create_directories(args.out_dir);
  auto manifest = Manifest("simulate", args.scenario_path);
  manifest.seeds["topology"] = base.topology_seed;
  manifest.seeds["dynamics"] = base.dynamics_seed;

  std::ostringstream sweep_csv;
  sweep_csv << io::ManifestCsvComment(manifest);
  sweep_csv << "point," << (sweeping ? sweep_field : std::string("value"))
            << ",reps,mean_satisfied,min_satisfied,max_satisfied,mean_slots,mean_updates,all_natural_pne\n";

  Json points = Json::array();
  for (std::size_t k = 0; k < sweep_values.size(); ++k) {
    ScenarioConfig cfg = base;
    if (sweep_field == "high_demand_fraction") cfg.high_demand_fraction = sweep_values[k];
    if (sweep_field == "num_users") cfg.num_users = static_cast<int>(sweep_values[k]);
    ValidateScenario(cfg);
    const ReplicationSummary summary = Replicate(cfg, args.reps, args.rep_csv, args.threads);

    bool all_natural = true;
    for (const auto& run : summary.runs) all_natural = all_natural && run.natural_equilibrium;

    if (args.rep_csv) {
      for (int r = 0; r < args.reps; ++r) {
        io::RunManifest rep_manifest = manifest;
        rep_manifest.seeds = {{"topology", summary.runs[r].topology_seed},
                              {"dynamics", summary.runs[r].dynamics_seed}};
        std::ostringstream csv;
        csv << io::ManifestCsvComment(rep_manifest);
        io::WriteSlotCsv(csv, summary.results[r], cfg.num_users);
        const std::string name = RepFileName(static_cast<int>(k), r, sweeping);
        io::WriteTextFile((std::filesystem::path(args.out_dir) / name).string(), csv.str());
      }
    }
    sweep_csv << k << ',' << io::FormatDouble(sweeping ? sweep_values[k] : 0.0) << ',' << summary.reps << ','
              << io::FormatDouble(summary.mean_satisfied) << ',' << summary.min_satisfied << ','
              << summary.max_satisfied << ',' << io::FormatDouble(summary.mean_slots) << ','
              << io::FormatDouble(summary.mean_updates) << ',' << (all_natural ? 1 : 0) << '\n';

    Json point = io::ReplicationSummaryToJson(summary);
    point["scenario"] = io::ScenarioToJson(cfg);
    point["all_natural_pne"] = all_natural;
    if (sweeping) point[sweep_field] = sweep_values[k];
    points.push_back(std::move(point));

    out << (sweeping ? sweep_field + "=" + io::FormatDouble(sweep_values[k]) + " " : std::string())
        << "reps=" << summary.reps << " mean_satisfied=" << io::FormatDouble(summary.mean_satisfied)
        << " mean_slots=" << io::FormatDouble(summary.mean_slots) << "\n";
  }

  const auto summary_csv = (std::filesystem::path(args.out_dir) / "summary.csv").string();
  const auto summary_json = (std::filesystem::path(args.out_dir) / "summary.json").string();
  io::WriteTextFile(summary_csv, sweep_csv.str());
  manifest.outputs["summary_csv"] = summary_csv;
  manifest.outputs["summary_json"] = summary_json;
  Json result;
  result["manifest"] = io::ManifestToJson(manifest);
  if (sweeping) result["sweep_field"] = sweep_field;
  result["points"] = std::move(points);
  WriteJson(summary_json, result);
  return kOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"QoS satisfaction games for spectrum sharing", "qosgame"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Centralised solution of a game file");
  solve_cmd->add_option("game", solve.game_path, "Game JSON file")->required();
  solve_cmd->add_option("--algorithm", solve.algorithm, "alg1 | round-robin | brute-force")
      ->check(CLI::IsMember({"alg1", "round-robin", "brute-force"}));
  solve_cmd->add_option("--out", solve.out_path, "Write the profile JSON here");
  solve_cmd->add_option("--budget", solve.budget, "Brute-force limit on (C+1)^N");

  DynamicsArgs dyn;
  auto* dyn_cmd = app.add_subcommand("dynamics", "Run better-response dynamics and emit the trace");
  dyn_cmd->add_option("game", dyn.game_path, "Game JSON file (optional \"graph\" member)")->required();
  dyn_cmd->add_option("--initial", dyn.initial_path, "Initial profile JSON (default: all dormant)");
  dyn_cmd->add_option("--scheduler", dyn.scheduler, "round-robin | random")
      ->check(CLI::IsMember({"round-robin", "random"}));
  dyn_cmd->add_option("--choice", dyn.choice, "random | lowest")->check(CLI::IsMember({"random", "lowest"}));
  dyn_cmd->add_flag("--any-better", dyn.any_better, "Take any better response, not only best responses");
  dyn_cmd->add_option("--seed", dyn.seed, "RNG seed");
  dyn_cmd->add_option("--csv", dyn.csv_path, "Trace CSV output");
  dyn_cmd->add_option("--json", dyn.json_path, "Trace JSON output");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Exact price of anarchy report");
  analyze_cmd->add_option("game", analyze.game_path, "Game JSON file")->required();
  analyze_cmd->add_option("--out", analyze.out_path, "Also write the report here");
  analyze_cmd->add_option("--budget", analyze.budget, "Limit on (C+1)^N");

  ReduceArgs reduce;
  auto* reduce_cmd = app.add_subcommand("reduce-3dm", "Reduce a 3-dimensional matching instance to a game");
  reduce_cmd->add_option("instance", reduce.instance_path, "3DM instance JSON file")->required();
  reduce_cmd->add_option("--out", reduce.out_path, "Write the reduced game JSON here");
  reduce_cmd->add_flag("!--no-decide", reduce.decide, "Skip the matching decision");
  reduce_cmd->add_option("--budget", reduce.budget, "Limit on (C+1)^N for the optimum search");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the distributed protocol on a scenario");
  sim_cmd->add_option("scenario", sim.scenario_path, "Scenario JSON file")->required();
  sim_cmd->add_option("--reps", sim.reps, "Replications per scenario point");
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = hardware)");
  sim_cmd->add_flag("!--no-rep-csv", sim.rep_csv, "Skip per-replication slot CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*solve_cmd) return Solve(solve, out);
    if (*dyn_cmd) return Dynamics(dyn, out);
    if (*analyze_cmd) return Analyze(analyze, out);
    if (*reduce_cmd) return Reduce(reduce, out);
    if (*sim_cmd) return Simulate(sim, out);
  } catch (const PreconditionError& e) {
    err << "error: precondition violated: " << e.what() << "\n";
    return kValidationError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return kBudgetRefusal;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violated: " << e.what() << "\n";
    return kInvariantViolation;
  }
  return kValidationError;
}

}  // namespace qos::cli
