#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qos/dynamics.hpp"
#include "qos/errors.hpp"
#include "qos/game.hpp"
#include "qos/hardness.hpp"
#include "qos/io.hpp"
#include "qos/simkit.hpp"
#include "qos/solvers.hpp"
#include "qos/spatial.hpp"

namespace py = pybind11;

namespace {

py::tuple RationalTuple(const qos::Rational& r) { return py::make_tuple(r.num(), r.den()); }

qos::SpatialGame MakeSpatial(const qos::Game& game, const std::optional<qos::InterferenceGraph>& graph) {
  return graph ? qos::SpatialGame(game, *graph) : qos::SpatialGame(game);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QoS satisfaction games for spectrum sharing";

  py::register_exception<qos::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<qos::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<qos::BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<qos::InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  // ---- game core -----------------------------------------------------------
  py::enum_<qos::Contention>(m, "Contention")
      .value("TDMA", qos::Contention::kTdma)
      .value("CONSTANT", qos::Contention::kConstant)
      .value("TABULATED", qos::Contention::kTabulated);

  py::class_<qos::RateSpec>(m, "RateSpec")
      .def(py::init<int, int, std::vector<double>, std::vector<std::uint8_t>, qos::Contention,
                    std::vector<double>>(),
           py::arg("num_users"), py::arg("num_channels"), py::arg("mean_rate"), py::arg("available"),
           py::arg("contention") = qos::Contention::kTdma, py::arg("table") = std::vector<double>{})
      .def_static(
          "per_channel",
          [](int num_users, const std::vector<double>& rates, qos::Contention contention) {
            return qos::RateSpec::PerChannel(num_users, rates, contention);
          },
          py::arg("num_users"), py::arg("channel_rates"), py::arg("contention") = qos::Contention::kTdma)
      .def_property_readonly("num_users", &qos::RateSpec::num_users)
      .def_property_readonly("num_channels", &qos::RateSpec::num_channels)
      .def("mean_rate", &qos::RateSpec::mean_rate)
      .def("available", &qos::RateSpec::available);

  m.def("shannon_capacity", &qos::ShannonCapacity, py::arg("bandwidth"), py::arg("power"), py::arg("gain"),
        py::arg("noise"));
  m.def("rate", &qos::Rate, py::arg("spec"), py::arg("n"), py::arg("c"), py::arg("congestion"));
  m.def("derive_threshold", &qos::DeriveThreshold, py::arg("spec"), py::arg("n"), py::arg("c"),
        py::arg("demand"), py::arg("num_players"));

  py::class_<qos::Game>(m, "Game")
      .def(py::init([](const std::vector<std::vector<int>>& rows) { return qos::Game::FromRows(rows); }),
           py::arg("thresholds"))
      .def_static(
          "homogeneous_channels",
          [](const std::vector<int>& per_player, int c) { return qos::Game::HomogeneousChannels(per_player, c); },
          py::arg("per_player"), py::arg("num_channels"))
      .def_static(
          "homogeneous_users",
          [](int n, const std::vector<int>& per_channel) { return qos::Game::HomogeneousUsers(n, per_channel); },
          py::arg("num_players"), py::arg("per_channel"))
      .def_property_readonly("num_players", &qos::Game::num_players)
      .def_property_readonly("num_channels", &qos::Game::num_channels)
      .def_property_readonly("thresholds", &qos::Game::rows)
      .def("threshold", &qos::Game::threshold, py::arg("n"), py::arg("c"))
      .def("to_json", [](const qos::Game& g) { return qos::io::GameToJson(g).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return qos::io::GameFromJson(qos::io::Json::parse(text)); })
      .def(py::self == py::self)
      .def("__repr__", [](const qos::Game& g) {
        return "Game(n_players=" + std::to_string(g.num_players()) +
               ", n_channels=" + std::to_string(g.num_channels()) + ")";
      });

  m.def(
      "build_game",
      [](const qos::RateSpec& spec, const std::vector<double>& demands) { return qos::BuildGame(spec, demands); },
      py::arg("spec"), py::arg("demands"));
  m.def("congestion", &qos::Congestion, py::arg("profile"), py::arg("c"));
  m.def("utility", &qos::Utility, py::arg("game"), py::arg("profile"), py::arg("n"));
  m.def("welfare", &qos::Welfare, py::arg("game"), py::arg("profile"));
  m.def("satisfied_count", &qos::SatisfiedCount, py::arg("game"), py::arg("profile"));
  m.def("is_natural", &qos::IsNatural, py::arg("game"), py::arg("profile"));

  // ---- spatial -------------------------------------------------------------
  py::class_<qos::InterferenceGraph>(m, "InterferenceGraph")
      .def(py::init([](int n, std::vector<qos::Edge> edges, const std::vector<std::pair<double, double>>& pos) {
             std::vector<qos::Point> points;
             for (const auto& [x, y] : pos) points.push_back({x, y});
             return qos::InterferenceGraph(n, std::move(edges), std::move(points));
           }),
           py::arg("num_vertices"), py::arg("edges"), py::arg("positions") = std::vector<std::pair<double, double>>{})
      .def_property_readonly("num_vertices", &qos::InterferenceGraph::num_vertices)
      .def_property_readonly("edges", &qos::InterferenceGraph::edges)
      .def_property_readonly("positions",
                             [](const qos::InterferenceGraph& g) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : g.positions()) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def("neighbors", &qos::InterferenceGraph::neighbors)
      .def("adjacent", &qos::InterferenceGraph::adjacent);

  m.def("neighborhood", &qos::Neighborhood, py::arg("graph"), py::arg("n"));
  m.def("complete_graph", &qos::CompleteGraph, py::arg("n"));
  m.def("random_geometric_graph", &qos::RandomGeometricGraph, py::arg("n"), py::arg("width"), py::arg("height"),
        py::arg("range"), py::arg("seed"));

  py::class_<qos::SpatialGame>(m, "SpatialGame")
      .def(py::init(&MakeSpatial), py::arg("game"), py::arg("graph") = std::nullopt)
      .def_property_readonly("game", &qos::SpatialGame::game)
      .def_property_readonly("graph", &qos::SpatialGame::graph);

  m.def("local_congestion", &qos::LocalCongestion, py::arg("sgame"), py::arg("profile"), py::arg("n"),
        py::arg("c"));
  m.def("spatial_utility", &qos::SpatialUtility, py::arg("sgame"), py::arg("profile"), py::arg("n"));

  // ---- dynamics ------------------------------------------------------------
  m.def("better_responses", &qos::BetterResponses, py::arg("sgame"), py::arg("profile"), py::arg("n"));
  m.def("best_response_set", &qos::BestResponseSet, py::arg("sgame"), py::arg("profile"), py::arg("n"));
  m.def("is_pure_nash", &qos::IsPureNash, py::arg("sgame"), py::arg("profile"));
  m.def("potential2", &qos::Potential2, py::arg("sgame"), py::arg("profile"));
  m.def("update_bound", &qos::UpdateBound, py::arg("num_players"));

  py::enum_<qos::Scheduler>(m, "Scheduler")
      .value("ROUND_ROBIN", qos::Scheduler::kRoundRobin)
      .value("UNIFORM_RANDOM", qos::Scheduler::kUniformRandom);
  py::enum_<qos::ChoiceRule>(m, "ChoiceRule")
      .value("UNIFORM", qos::ChoiceRule::kUniform)
      .value("LOWEST_INDEX", qos::ChoiceRule::kLowestIndex);

  py::class_<qos::UpdateEvent>(m, "UpdateEvent")
      .def_readonly("step", &qos::UpdateEvent::step)
      .def_readonly("player", &qos::UpdateEvent::player)
      .def_readonly("from_strategy", &qos::UpdateEvent::from)
      .def_readonly("to_strategy", &qos::UpdateEvent::to)
      .def_readonly("utility_before", &qos::UpdateEvent::utility_before)
      .def_readonly("utility_after", &qos::UpdateEvent::utility_after)
      .def_readonly("potential2", &qos::UpdateEvent::potential2_after);
  py::class_<qos::Trace>(m, "Trace")
      .def_readonly("initial_profile", &qos::Trace::initial_profile)
      .def_readonly("initial_potential2", &qos::Trace::initial_potential2)
      .def_readonly("events", &qos::Trace::events)
      .def_readonly("final_profile", &qos::Trace::final_profile)
      .def_readonly("converged", &qos::Trace::converged);

  m.def(
      "run_better_response",
      [](const qos::SpatialGame& sgame, const qos::Profile& initial, qos::Scheduler scheduler,
         qos::ChoiceRule choice, std::uint64_t seed, bool any_better) {
        qos::DynamicsOptions options;
        options.scheduler = scheduler;
        options.choice = choice;
        options.seed = seed;
        options.any_better_response = any_better;
        return qos::RunBetterResponse(sgame, initial, options);
      },
      py::arg("sgame"), py::arg("initial"), py::arg("scheduler") = qos::Scheduler::kUniformRandom,
      py::arg("choice") = qos::ChoiceRule::kUniform, py::arg("seed") = 0, py::arg("any_better") = false);

  // ---- solvers -------------------------------------------------------------
  m.def("algorithm1", &qos::Algorithm1, py::arg("game"));
  m.def("round_robin_profile", &qos::RoundRobinProfile, py::arg("num_players"), py::arg("num_channels"));
  m.def(
      "brute_force_optimum",
      [](const qos::Game& game, std::uint64_t budget) {
        const auto r = qos::BruteForceOptimum(game, budget);
        return py::make_tuple(r.welfare, r.witness);
      },
      py::arg("game"), py::arg("budget") = qos::kDefaultSearchBudget);
  m.def("enumerate_pne", &qos::EnumeratePne, py::arg("game"), py::arg("budget") = qos::kDefaultSearchBudget);
  m.def(
      "price_of_anarchy",
      [](const qos::Game& game, std::uint64_t budget) {
        const auto r = qos::PriceOfAnarchy(game, budget);
        py::dict d;
        d["optimum_welfare"] = r.optimum_welfare;
        d["worst_pne_welfare"] = r.worst_pne_welfare;
        d["best_pne_welfare"] = r.best_pne_welfare;
        d["poa"] = RationalTuple(r.poa);
        d["bound"] = RationalTuple(r.bound);
        d["pne_count"] = r.pne_count;
        d["optimum_witness"] = r.optimum_witness;
        d["worst_pne"] = r.worst_pne;
        return d;
      },
      py::arg("game"), py::arg("budget") = qos::kDefaultSearchBudget);
  m.def(
      "verify_homogeneous_users",
      [](const qos::Game& game, const qos::Profile& profile) {
        const auto r = qos::VerifyHomogeneousUsers(game, profile);
        return py::make_tuple(r.is_pne, r.is_canonical_count, r.is_optimum);
      },
      py::arg("game"), py::arg("profile"));

  // ---- hardness ------------------------------------------------------------
  py::class_<qos::ThreeDmInstance>(m, "ThreeDmInstance")
      .def(py::init([](int size, const std::vector<std::tuple<int, int, int>>& triples) {
             qos::ThreeDmInstance inst{size, {}};
             for (const auto& [x, y, z] : triples) inst.triples.push_back({x, y, z});
             qos::ValidateInstance(inst);
             return inst;
           }),
           py::arg("size"), py::arg("triples"))
      .def_readonly("size", &qos::ThreeDmInstance::size)
      .def_property_readonly("triples", [](const qos::ThreeDmInstance& inst) {
        std::vector<std::tuple<int, int, int>> out;
        for (const auto& t : inst.triples) out.emplace_back(t.x, t.y, t.z);
        return out;
      });
  py::enum_<qos::InstanceKind>(m, "InstanceKind")
      .value("PLANTED", qos::InstanceKind::kPlanted)
      .value("BLOCKED", qos::InstanceKind::kBlocked)
      .value("UNIFORM", qos::InstanceKind::kUniform);

  m.def("reduce_3dm", &qos::Reduce3dm, py::arg("instance"));
  m.def(
      "decide_matching_via_game",
      [](const qos::ThreeDmInstance& inst) { return qos::DecideMatchingViaGame(inst); }, py::arg("instance"));
  m.def("brute_force_3dm", &qos::BruteForce3dm, py::arg("instance"));
  m.def("random_3dm_instance", &qos::RandomThreeDmInstance, py::arg("size"), py::arg("num_triples"),
        py::arg("kind"), py::arg("seed"));

  // ---- simkit --------------------------------------------------------------
  py::class_<qos::ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("num_users", &qos::ScenarioConfig::num_users)
      .def_readwrite("width_m", &qos::ScenarioConfig::width_m)
      .def_readwrite("height_m", &qos::ScenarioConfig::height_m)
      .def_readwrite("interference_range_m", &qos::ScenarioConfig::interference_range_m)
      .def_readwrite("channel_rates_mbps", &qos::ScenarioConfig::channel_rates_mbps)
      .def_readwrite("high_demand_fraction", &qos::ScenarioConfig::high_demand_fraction)
      .def_readwrite("low_demand_mbps", &qos::ScenarioConfig::low_demand_mbps)
      .def_readwrite("high_demand_mbps", &qos::ScenarioConfig::high_demand_mbps)
      .def_readwrite("max_slots", &qos::ScenarioConfig::max_slots)
      .def_readwrite("topology_seed", &qos::ScenarioConfig::topology_seed)
      .def_readwrite("dynamics_seed", &qos::ScenarioConfig::dynamics_seed)
      .def_readwrite("collisions", &qos::ScenarioConfig::collisions)
      .def_readwrite("guard_interval", &qos::ScenarioConfig::guard_interval);

  m.def(
      "simulate",
      [](const qos::ScenarioConfig& config) {
        const auto scenario = qos::BuildScenario(config);
        const auto result = qos::Simulate(scenario);
        py::dict d;
        d["converged"] = result.converged;
        d["slots"] = result.slot_count();
        d["update_count"] = result.update_count;
        d["satisfied_count"] = result.satisfied_count;
        d["welfare"] = result.welfare;
        d["final_profile"] = result.final_profile;
        std::vector<std::vector<double>> throughput;
        for (const auto& slot : result.slots) throughput.push_back(slot.throughput);
        d["throughput"] = throughput;
        return d;
      },
      py::arg("config"));
  m.def(
      "replicate",
      [](const qos::ScenarioConfig& config, int reps) {
        const auto s = qos::Replicate(config, reps);
        py::dict d;
        d["reps"] = s.reps;
        d["mean_satisfied"] = s.mean_satisfied;
        d["min_satisfied"] = s.min_satisfied;
        d["max_satisfied"] = s.max_satisfied;
        d["mean_slots"] = s.mean_slots;
        d["mean_updates"] = s.mean_updates;
        return d;
      },
      py::arg("config"), py::arg("reps"));
}
