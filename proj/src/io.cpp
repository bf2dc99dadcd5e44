#include "qos/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qos/errors.hpp"

namespace qos::io {
namespace {

template <typename T>
T Get(const Json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(where + ": " + e.what());
  }
}

const Json& Member(const Json& doc, const std::string& key, const std::string& what) {
  if (!doc.is_object()) throw DomainError(what + ": expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw DomainError(what + ": missing field '" + key + "'");
  return *it;
}

std::string ContentionName(Contention c) {
  switch (c) {
    case Contention::kTdma:
      return "tdma";
    case Contention::kConstant:
      return "constant";
    case Contention::kTabulated:
      return "tabulated";
  }
  return "tdma";
}

}  // namespace

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

void RequireSchemaVersion(const Json& doc, const std::string& what) {
  const int version = Get<int>(Member(doc, "schema_version", what), what + " schema_version");
  if (version != kSchemaVersion) {
    throw DomainError(what + ": unsupported schema_version " + std::to_string(version) +
                      " (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

Json GameToJson(const Game& game, const InterferenceGraph* graph) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n_players"] = game.num_players();
  doc["n_channels"] = game.num_channels();
  doc["thresholds"] = game.rows();
  if (graph) doc["graph"] = GraphToJson(*graph);
  return doc;
}

Game GameFromJson(const Json& doc) {
  RequireSchemaVersion(doc, "game");
  const int n = Get<int>(Member(doc, "n_players", "game"), "game n_players");
  const int c = Get<int>(Member(doc, "n_channels", "game"), "game n_channels");
  const auto rows = Get<std::vector<std::vector<int>>>(Member(doc, "thresholds", "game"), "game thresholds");
  if (rows.size() != static_cast<std::size_t>(n)) {
    throw DomainError("game: thresholds has " + std::to_string(rows.size()) + " rows, n_players is " +
                      std::to_string(n));
  }
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(c)) {
      throw DomainError("game: every thresholds row needs n_channels = " + std::to_string(c) + " entries");
    }
  }
  return Game::FromRows(rows);
}

std::optional<InterferenceGraph> GraphFromGameJson(const Json& doc) {
  auto it = doc.find("graph");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return GraphFromJson(*it);
}

Json GraphToJson(const InterferenceGraph& graph) {
  Json doc;
  doc["n_vertices"] = graph.num_vertices();
  Json edges = Json::array();
  for (const auto& [a, b] : graph.edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  if (graph.has_positions()) {
    Json positions = Json::array();
    for (const auto& p : graph.positions()) positions.push_back({p.x, p.y});
    doc["positions"] = std::move(positions);
  }
  return doc;
}

InterferenceGraph GraphFromJson(const Json& doc) {
  const int n = Get<int>(Member(doc, "n_vertices", "graph"), "graph n_vertices");
  std::vector<Edge> edges;
  for (const auto& e : Get<std::vector<std::array<int, 2>>>(Member(doc, "edges", "graph"), "graph edges")) {
    edges.emplace_back(e[0], e[1]);
  }
  std::vector<Point> positions;
  if (auto it = doc.find("positions"); it != doc.end()) {
    for (const auto& p : Get<std::vector<std::array<double, 2>>>(*it, "graph positions")) {
      positions.push_back({p[0], p[1]});
    }
  }
  return InterferenceGraph(n, std::move(edges), std::move(positions));
}

Json ProfileToJson(const Profile& profile) { return Json(profile); }

Profile ProfileFromJson(const Json& doc) {
  if (doc.is_object()) return Get<Profile>(Member(doc, "profile", "profile"), "profile");
  return Get<Profile>(doc, "profile");
}

Json InstanceToJson(const ThreeDmInstance& instance) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["I"] = instance.size;
  Json triples = Json::array();
  for (const auto& t : instance.triples) triples.push_back({t.x, t.y, t.z});
  doc["triples"] = std::move(triples);
  return doc;
}

ThreeDmInstance InstanceFromJson(const Json& doc) {
  RequireSchemaVersion(doc, "3dm instance");
  ThreeDmInstance instance;
  instance.size = Get<int>(Member(doc, "I", "3dm instance"), "3dm instance I");
  for (const auto& t :
       Get<std::vector<std::array<int, 3>>>(Member(doc, "triples", "3dm instance"), "3dm instance triples")) {
    instance.triples.push_back({t[0], t[1], t[2]});
  }
  ValidateInstance(instance);
  return instance;
}

Json ScenarioToJson(const ScenarioConfig& config) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["num_users"] = config.num_users;
  doc["width_m"] = config.width_m;
  doc["height_m"] = config.height_m;
  doc["interference_range_m"] = config.interference_range_m;
  doc["channel_rates_mbps"] = config.channel_rates_mbps;
  doc["high_demand_fraction"] = config.high_demand_fraction;
  doc["low_demand_mbps"] = config.low_demand_mbps;
  doc["high_demand_mbps"] = config.high_demand_mbps;
  doc["mac"] = ContentionName(config.mac);
  if (!config.availability.empty()) {
    const auto c = config.channel_rates_mbps.size();
    Json rows = Json::array();
    for (std::size_t i = 0; i < config.availability.size(); i += c) {
      rows.push_back(std::vector<int>(config.availability.begin() + static_cast<std::ptrdiff_t>(i),
                                      config.availability.begin() + static_cast<std::ptrdiff_t>(i + c)));
    }
    doc["availability"] = std::move(rows);
  }
  doc["max_slots"] = config.max_slots;
  doc["topology_seed"] = config.topology_seed;
  doc["dynamics_seed"] = config.dynamics_seed;
  doc["collisions"] = config.collisions;
  doc["guard_interval"] = config.guard_interval;
  return doc;
}

ScenarioConfig ScenarioFromJson(const Json& doc) {
  RequireSchemaVersion(doc, "scenario");
  ScenarioConfig config;
  auto read = [&](const char* key, auto& field) {
    if (auto it = doc.find(key); it != doc.end()) {
      field = Get<std::decay_t<decltype(field)>>(*it, std::string("scenario field '") + key + "'");
    }
  };
  read("num_users", config.num_users);
  read("width_m", config.width_m);
  read("height_m", config.height_m);
  read("interference_range_m", config.interference_range_m);
  read("channel_rates_mbps", config.channel_rates_mbps);
  read("high_demand_fraction", config.high_demand_fraction);
  read("low_demand_mbps", config.low_demand_mbps);
  read("high_demand_mbps", config.high_demand_mbps);
  read("max_slots", config.max_slots);
  read("topology_seed", config.topology_seed);
  read("dynamics_seed", config.dynamics_seed);
  read("collisions", config.collisions);
  read("guard_interval", config.guard_interval);
  if (auto it = doc.find("mac"); it != doc.end()) {
    const auto mac = Get<std::string>(*it, "scenario field 'mac'");
    if (mac == "tdma") {
      config.mac = Contention::kTdma;
    } else if (mac == "constant") {
      config.mac = Contention::kConstant;
    } else {
      throw DomainError("scenario field 'mac': expected \"tdma\" or \"constant\", got \"" + mac + "\"");
    }
  }
  if (auto it = doc.find("availability"); it != doc.end()) {
    const auto rows = Get<std::vector<std::vector<int>>>(*it, "scenario field 'availability'");
    config.availability.clear();
    for (const auto& row : rows) {
      if (row.size() != config.channel_rates_mbps.size()) {
        throw DomainError("scenario field 'availability': each row needs one flag per channel");
      }
      for (int a : row) {
        if (a != 0 && a != 1) throw DomainError("scenario field 'availability': entries must be 0 or 1");
        config.availability.push_back(static_cast<std::uint8_t>(a));
      }
    }
  }
  ValidateScenario(config);
  return config;
}

Json PoaReportToJson(const PoaReport& report) {
  Json doc;
  doc["optimum_welfare"] = report.optimum_welfare;
  doc["worst_pne_welfare"] = report.worst_pne_welfare;
  doc["best_pne_welfare"] = report.best_pne_welfare;
  doc["poa"] = report.poa.str();
  doc["poa_value"] = report.poa.value();
  doc["bound"] = report.bound.str();
  doc["bound_value"] = report.bound.value();
  doc["within_bound"] = report.poa <= report.bound;
  doc["pne_count"] = report.pne_count;
  doc["optimum_witness"] = report.optimum_witness;
  doc["worst_pne"] = report.worst_pne;
  return doc;
}

void WriteTraceCsv(std::ostream& out, const Trace& trace) {
  out << "step,player,from,to,utility_before,utility_after,potential2\n";
  for (const auto& e : trace.events) {
    out << e.step << ',' << e.player << ',' << e.from << ',' << e.to << ',' << e.utility_before << ','
        << e.utility_after << ',' << e.potential2_after << '\n';
  }
}

Json TraceToJson(const Trace& trace) {
  Json doc;
  doc["initial_profile"] = trace.initial_profile;
  doc["initial_potential2"] = trace.initial_potential2;
  Json events = Json::array();
  for (const auto& e : trace.events) {
    Json ev;
    ev["step"] = e.step;
    ev["player"] = e.player;
    ev["from"] = e.from;
    ev["to"] = e.to;
    ev["utility_before"] = e.utility_before;
    ev["utility_after"] = e.utility_after;
    ev["potential2"] = e.potential2_after;
    events.push_back(std::move(ev));
  }
  doc["events"] = std::move(events);
  doc["final_profile"] = trace.final_profile;
  doc["converged"] = trace.converged;
  doc["update_count"] = trace.events.size();
  return doc;
}

void WriteSlotCsv(std::ostream& out, const SimulationResult& result, int num_users) {
  out << "slot,updater,satisfied_count";
  for (int n = 0; n < num_users; ++n) out << ",throughput_" << n;
  out << '\n';
  for (const auto& slot : result.slots) {
    out << slot.slot << ',' << slot.updater << ',' << slot.satisfied_count;
    for (int n = 0; n < num_users; ++n) {
      out << ',' << (slot.throughput.empty() ? std::string("0") : FormatDouble(slot.throughput[n]));
    }
    out << '\n';
  }
}

Json SimulationSummaryToJson(const SimulationResult& result) {
  Json doc;
  doc["converged"] = result.converged;
  doc["slots"] = result.slot_count();
  doc["update_count"] = result.update_count;
  doc["satisfied_count"] = result.satisfied_count;
  doc["welfare"] = result.welfare;
  doc["collision_slots"] = result.collision_count;
  doc["final_profile"] = result.final_profile;
  return doc;
}

Json ReplicationSummaryToJson(const ReplicationSummary& summary) {
  Json doc;
  doc["reps"] = summary.reps;
  doc["mean_satisfied"] = summary.mean_satisfied;
  doc["min_satisfied"] = summary.min_satisfied;
  doc["max_satisfied"] = summary.max_satisfied;
  doc["mean_slots"] = summary.mean_slots;
  doc["mean_updates"] = summary.mean_updates;
  Json runs = Json::array();
  for (const auto& r : summary.runs) {
    Json run;
    run["topology_seed"] = r.topology_seed;
    run["dynamics_seed"] = r.dynamics_seed;
    run["converged"] = r.converged;
    run["slots"] = r.slots;
    run["update_count"] = r.update_count;
    run["satisfied_count"] = r.satisfied_count;
    run["welfare"] = r.welfare;
    run["natural_equilibrium"] = r.natural_equilibrium;
    runs.push_back(std::move(run));
  }
  doc["runs"] = std::move(runs);
  return doc;
}

Json ManifestToJson(const RunManifest& manifest) {
  Json doc;
  doc["tool"] = "qosgame";
  doc["tool_version"] = manifest.tool_version;
  doc["subcommand"] = manifest.subcommand;
  doc["config_path"] = manifest.config_path;
  doc["seeds"] = manifest.seeds;
  doc["outputs"] = manifest.outputs;
  if (!manifest.timestamp.empty()) doc["timestamp"] = manifest.timestamp;
  return doc;
}

std::string ManifestCsvComment(const RunManifest& manifest) {
  std::ostringstream out;
  out << "# tool=qosgame " << manifest.tool_version << '\n';
  out << "# subcommand=" << manifest.subcommand << '\n';
  out << "# config=" << manifest.config_path << '\n';
  for (const auto& [name, seed] : manifest.seeds) out << "# seed." << name << '=' << seed << '\n';
  return out.str();
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace qos::io
