#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "byzcast/context.hpp"
#include "byzcast/graph.hpp"
#include "byzcast/types.hpp"

namespace byzcast {

/// Flood message: label, binary body, and the path travelled so far
/// (origin through previous transmitter; empty at origination). The path is
/// a raw claim — faulty senders may put anything in it.
struct Message {
  Label label = 0;
  Bit body = 0;
  Path path;

  bool operator==(const Message&) const = default;
};

/// Per-node received-flood memory for one iteration: full paths ending at
/// this node (as PathIds) -> recorded body. Cleared between iterations.
class ValueStore {
 public:
  void reset(Label label, const PathIndex& idx);

  Label label() const { return label_; }
  bool has(PathId key) const { return body_[key] >= 0; }
  Bit get(PathId key) const { return static_cast<Bit>(body_[key]); }
  void set(PathId key, Bit b) { body_[key] = static_cast<std::int8_t>(b); }
  int recorded() const;

  /// Sequence-level view: the full path must terminate at the owning node.
  std::optional<Bit> lookup(const PathIndex& idx, const Path& full_path) const;

 private:
  Label label_ = -1;
  std::vector<std::int8_t> body_;  // by PathId; -1 = unset
};

struct NodeState {
  NodeId id = 0;
  Bit input = 0;
  Bit gamma = 0;
  bool is_faulty = false;
  ValueStore store;
};

/// One scheduled broadcast: the key this node recorded; the wire message
/// claims the key's path minus this node, with this node as transmitter.
struct OutboxEntry {
  Bit body = 0;
  PathId key = kNoPath;

  bool operator==(const OutboxEntry&) const = default;
};

enum class RejectReason {
  none,           // accepted
  malformed_path, // claimed path + sender is not a simple path of G
  self_in_path,   // receiver already appears on the path
  off_schedule,   // |claimed path| != round - 1
  duplicate_key,  // first body for this (label, path) already recorded
};

struct ReceiveResult {
  bool accepted = false;
  RejectReason reject = RejectReason::none;
  bool label_rewritten = false;
  PathId recorded_key = kNoPath;
  Bit recorded_body = 0;
  std::optional<OutboxEntry> forward;
};

/// Round-1 origination: flood gamma with the iteration label. Also records
/// the node's own single-node path so step (b) lookups are uniform.
Message originate(NodeState& state, const SimContext& ctx, Label label);

/// Apply the acceptance rules to a received message and record/forward it.
/// `sender` must be a neighbor of state.id.
ReceiveResult on_receive(NodeState& state, const SimContext& ctx, NodeId sender,
                         const Message& m, int round);

/// Engine fast path: `q` is the id of claimed-path + sender (kNoPath when
/// that sequence is not a simple path of G), `claimed_len` the claimed
/// path's length.
ReceiveResult deliver(NodeState& state, const SimContext& ctx, PathId q,
                      Bit body, Label msg_label, int claimed_len, int round);

struct SubstitutionResult {
  std::vector<PathId> recorded;  // keys recorded with the default body 0
  std::vector<OutboxEntry> forwards;
};

/// End-of-round silence substitution for one neighbor: every expected path
/// with no recorded entry is treated as if a body-0 message had arrived
/// along it, including the onward forward.
SubstitutionResult substitute_silence(NodeState& state, const SimContext& ctx,
                                      NodeId neighbor, int round, Label label);

/// Step (b): read every node's value along the candidate-excluding paths.
/// zero_set holds the nodes read as 0 (Z_v), one_set the nodes read as 1
/// (N_v); they partition V.
struct Partition {
  Mask zero_set = 0;
  Mask one_set = 0;
};

Partition compute_partition(const NodeState& state, const SimContext& ctx,
                            const CandidateSet& F);

/// Step (c) case split: keep_set retains state (A_v), switch_set may adopt
/// the other value (B_v).
struct CaseSelection {
  Mask keep_set = 0;
  Mask switch_set = 0;
  int case_no = 0;  // 1..4
};

CaseSelection select_AB(Mask zero_set, Mask one_set, const CandidateSet& F,
                        int f, int n);

/// Memo for repeated disjoint-path constructions within one run, keyed by
/// (node, source set, forbidden set).
using DisjointPathMemo =
    std::map<std::tuple<NodeId, Mask, Mask>, std::vector<PathId>>;

/// Step (c) state update: returns the node's state at the end of the
/// iteration. Nodes in keep_set stay; a node in switch_set reads f+1
/// disjoint keep_set-paths excluding F and adopts a unanimous value.
/// Throws PathConstructionFailed when the paths do not exist (hypothesis
/// violation).
Bit update_state(const NodeState& state, const SimContext& ctx,
                 const CaseSelection& sel, const CandidateSet& F, int f,
                 DisjointPathMemo* memo = nullptr);

Bit decide(const NodeState& state);

}  // namespace byzcast
