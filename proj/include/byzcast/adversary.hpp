#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "byzcast/protocol.hpp"
#include "byzcast/types.hpp"

namespace byzcast {

enum class AdversaryKind {
  conforming,
  crash_silent,
  flip_body,
  equivocate_attempt,
  path_forger,
  random_seeded,
  scripted,
};

std::string to_string(AdversaryKind k);
std::optional<AdversaryKind> adversary_kind_from_string(const std::string& s);

/// Explicit broadcasts for one (node, iteration, round) slot. iteration == -1
/// matches every iteration; message label == -1 stands for the current
/// iteration's label.
struct ScriptEntry {
  NodeId node = 0;
  Label iteration = -1;
  int round = 1;
  std::vector<Message> messages;

  bool operator==(const ScriptEntry&) const = default;
};

struct AdversaryStrategy {
  AdversaryKind kind = AdversaryKind::conforming;
  std::optional<std::uint64_t> seed;  // random_seeded; falls back to scenario seed
  std::vector<ScriptEntry> script;    // scripted

  bool operator==(const AdversaryStrategy&) const = default;
};

/// Deterministic counter-mode generator used by random_seeded: a pure
/// function of (seed, node, round, draw index), so sweeps replay exactly.
std::uint64_t adversary_draw(std::uint64_t seed, NodeId node, int round,
                             std::uint64_t draw_index);

struct RunView;  // defined in simulator.hpp; carries the omniscient run state

/// Broadcasts node w emits this round. The simulator delivers each message
/// identically to all neighbors of w; content is unconstrained.
std::vector<Message> plan_round(const AdversaryStrategy& strategy,
                                const RunView& view, NodeId w, int round,
                                Label label);

}  // namespace byzcast
