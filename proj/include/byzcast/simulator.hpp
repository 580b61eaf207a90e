#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "byzcast/adversary.hpp"
#include "byzcast/context.hpp"
#include "byzcast/graph.hpp"
#include "byzcast/protocol.hpp"
#include "byzcast/types.hpp"

namespace byzcast {

/// One experiment: who runs on what graph with which faults.
struct Scenario {
  GraphSpec graph_spec;
  int f = 0;
  std::vector<Bit> inputs;      // one per node
  std::vector<NodeId> faulty;   // sorted, |faulty| <= f
  AdversaryStrategy adversary;
  std::uint64_t seed = 0;

  Mask faulty_mask() const {
    Mask m = 0;
    for (NodeId v : faulty) m |= bit_of(v);
    return m;
  }
  bool is_faulty(NodeId v) const { return mask_has(faulty_mask(), v); }

  /// Throws ScenarioError on structural problems. The guardrail (n <= 10,
  /// f <= 3) is enforced separately by run() unless allow_large is set.
  void validate(const Graph& g) const;

  bool operator==(const Scenario&) const = default;
};

/// One logged broadcast. The claimed path is stored as the id of
/// claimed-path + sender when that is a simple path of G; otherwise the raw
/// claimed sequence is kept. delivered_to is left empty by the engine
/// (implicitly the sender's neighborhood) and filled when a trace is parsed
/// back from disk.
struct Transmission {
  NodeId sender = 0;
  Label label = 0;
  Bit body = 0;
  PathId q = kNoPath;                 // id of claimed + sender
  std::vector<NodeId> raw_claimed;    // only meaningful when q == kNoPath
  int claimed_len = 0;
  std::vector<NodeId> delivered_to;

  std::vector<NodeId> claimed_path(const PathIndex& idx) const;
};

struct RoundLog {
  std::vector<Transmission> transmissions;
};

/// Step (b)/(c) outcome for one non-faulty node in one iteration.
struct NodeIterationRecord {
  NodeId node = 0;
  Bit gamma_start = 0;
  Bit gamma_end = 0;
  int case_no = 0;
  Mask zero_set = 0;   // Z_v
  Mask one_set = 0;    // N_v
  Mask keep_set = 0;   // A_v
  Mask switch_set = 0; // B_v
};

struct IterationRecord {
  Label label = 0;
  CandidateSet candidate;
  std::vector<RoundLog> rounds;            // exactly n entries
  std::vector<NodeIterationRecord> nodes;  // non-faulty, ascending
};

struct Violation {
  Label iteration = -1;
  NodeId node = -1;
  std::string detail;
};

struct Verdict {
  bool agreement = false;
  bool validity = false;
  bool termination = false;
  std::vector<Violation> lemma_validity_violations;
  std::vector<Violation> lemma_agreement_violations;
  std::vector<Violation> observation_violations;

  bool all_ok() const {
    return agreement && validity && termination &&
           lemma_validity_violations.empty() &&
           lemma_agreement_violations.empty() &&
           observation_violations.empty();
  }
};

struct Trace {
  std::string schema = "byzcast-trace/1";
  Scenario scenario;
  bool hypothesis_ok = false;
  std::vector<IterationRecord> iterations;
  std::vector<Bit> decisions;  // all nodes; faulty entries are the shadow's
  std::optional<Verdict> verdict;
};

/// Omniscient read-only view handed to the adversary when planning a round:
/// all node states (including stores), everything transmitted in earlier
/// rounds of this iteration, the bit each node locked in at round 1 (-1
/// before that), and the faulty node's own conforming outbox.
struct RunView {
  const SimContext& ctx;
  const Scenario& scenario;
  const CandidateSet& candidate;
  const std::vector<NodeState>& states;
  const std::vector<RoundLog>& prior_rounds;
  std::span<const std::int8_t> flooded;
  std::span<const OutboxEntry> conforming;
};

struct RunOptions {
  bool allow_large = false;
};

/// One candidate-set iteration: n flood rounds (origination, forwarding,
/// boundary substitution), then steps (b) and (c) for every node. Faulty
/// nodes keep a conforming shadow state that the adversary may consult.
IterationRecord run_iteration(const SimContext& ctx, const CandidateSet& F,
                              std::vector<NodeState>& states,
                              const Scenario& scenario,
                              DisjointPathMemo* memo = nullptr);

/// Full run: every candidate set in canonical order, then the decisions.
/// Deterministic: identical scenarios produce identical traces. A shared
/// context (same graph and f) avoids rebuilding tables across runs.
Trace run(const Scenario& scenario, const RunOptions& options = {},
          const SimContext* shared_ctx = nullptr);

Label expected_iteration_count(int n, int f);

}  // namespace byzcast
