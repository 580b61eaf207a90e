#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace byzcast {

using NodeId = int;
using Bit = std::uint8_t;        // always 0 or 1
using Label = std::int64_t;      // candidate-set ordinal; adversaries may claim anything
using PathId = std::int32_t;     // index into a PathIndex; -1 = no such path
using Mask = std::uint32_t;      // node-set bitmask, one bit per node

inline constexpr PathId kNoPath = -1;

// Node-set masks cap the supported graph size; the simple-path universe
// explodes factorially long before this limit matters in practice.
inline constexpr int kMaxNodes = 30;

struct BadParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientPathsError : std::runtime_error {
  InsufficientPathsError(int found_, int requested_)
      : std::runtime_error("only " + std::to_string(found_) +
                           " disjoint paths exist, " + std::to_string(requested_) +
                           " requested"),
        found(found_),
        requested(requested_) {}
  int found;
  int requested;
};

struct PathConstructionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Mask bit_of(NodeId v) { return Mask{1} << v; }
inline bool mask_has(Mask m, NodeId v) { return (m >> v) & 1u; }
inline int mask_count(Mask m) { return __builtin_popcount(m); }

}  // namespace byzcast
