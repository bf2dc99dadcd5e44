#pragma once

// JSON documents and CSV emitters shared by the CLI and the Python module.
//
// Every JSON input document carries "schema_version": 1.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "qos/dynamics.hpp"
#include "qos/game.hpp"
#include "qos/hardness.hpp"
#include "qos/simkit.hpp"
#include "qos/solvers.hpp"
#include "qos/spatial.hpp"

namespace qos::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Throws DomainError on unreadable files or malformed JSON.
Json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);
void RequireSchemaVersion(const Json& doc, const std::string& what);

// Shortest decimal that round-trips to the same double.
std::string FormatDouble(double value);

// {"schema_version", "n_players", "n_channels", "thresholds": [[..], ..]}
// plus an optional "graph" object.
Json GameToJson(const Game& game, const InterferenceGraph* graph = nullptr);
Game GameFromJson(const Json& doc);
// The "graph" member of a game document, if present.
std::optional<InterferenceGraph> GraphFromGameJson(const Json& doc);

// {"n_vertices", "edges": [[a, b], ..], "positions": [[x, y], ..]?}
Json GraphToJson(const InterferenceGraph& graph);
InterferenceGraph GraphFromJson(const Json& doc);

// A bare integer array, or an object whose "profile" member is one.
Json ProfileToJson(const Profile& profile);
Profile ProfileFromJson(const Json& doc);

// {"schema_version", "I", "triples": [[x, y, z], ..]}
Json InstanceToJson(const ThreeDmInstance& instance);
ThreeDmInstance InstanceFromJson(const Json& doc);

Json ScenarioToJson(const ScenarioConfig& config);
// Missing fields keep their defaults; wrong types and invalid values raise
// DomainError naming the field.
ScenarioConfig ScenarioFromJson(const Json& doc);

Json PoaReportToJson(const PoaReport& report);

// Columns: step,player,from,to,utility_before,utility_after,potential2
void WriteTraceCsv(std::ostream& out, const Trace& trace);
Json TraceToJson(const Trace& trace);

// Columns: slot,updater,satisfied_count,throughput_0..throughput_{N-1}
void WriteSlotCsv(std::ostream& out, const SimulationResult& result, int num_users);
// {"converged", "slots", "update_count", "satisfied_count", "welfare"}
Json SimulationSummaryToJson(const SimulationResult& result);
Json ReplicationSummaryToJson(const ReplicationSummary& summary);

struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> outputs;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO 8601 UTC; empty to omit
};

Json ManifestToJson(const RunManifest& manifest);
// "# key=value" lines for CSV files. Leaves out the timestamp so identical
// runs produce identical files.
std::string ManifestCsvComment(const RunManifest& manifest);
std::string UtcTimestamp();

}  // namespace qos::io
