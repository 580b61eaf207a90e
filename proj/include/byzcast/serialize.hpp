#pragma once

#include <string>

#include <json.hpp>

#include "byzcast/simulator.hpp"
#include "byzcast/verifier.hpp"

namespace byzcast {

using OrderedJson = nlohmann::ordered_json;

// Schema tags. All documents are JSON with a fixed key order so that
// identical inputs serialize to identical bytes.
inline constexpr const char* kScenarioSchema = "byzcast-scenario/1";
inline constexpr const char* kTraceSchema = "byzcast-trace/1";
inline constexpr const char* kVerdictSchema = "byzcast-verdict/1";
inline constexpr const char* kMatrixSchema = "byzcast-matrix/1";

OrderedJson graph_spec_to_json(const GraphSpec& spec);
GraphSpec graph_spec_from_json(const OrderedJson& j);

OrderedJson scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const OrderedJson& j);
Scenario load_scenario_file(const std::string& path);

OrderedJson trace_to_json(const Trace& t);
Trace trace_from_json(const OrderedJson& j);
Trace load_trace_file(const std::string& path);

/// Verdict document: the verdict plus the scenario hash and hypothesis flag
/// it was issued for.
struct VerdictDoc {
  std::string scenario_hash;
  bool hypothesis_ok = false;
  Verdict verdict;
};

OrderedJson verdict_doc_to_json(const VerdictDoc& doc);
VerdictDoc verdict_doc_from_json(const OrderedJson& j);

/// Canonical compact form used for hashing and byte-identical replays.
std::string canonical_scenario_string(const Scenario& s);
/// FNV-1a 64 over the canonical form, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

std::uint64_t fnv1a64(std::string_view data);

/// Graph source accepted by the CLI: either a path to an edge-list file or
/// a family spec "complete:5", "cycle:6", "harary:4:8", "circulant:8:1,2".
GraphSpec parse_graph_source(const std::string& source);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace byzcast
