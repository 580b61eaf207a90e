#pragma once

#include <span>
#include <vector>

#include "byzcast/graph.hpp"
#include "byzcast/types.hpp"

namespace byzcast {

/// Immutable enumeration of every simple path of a graph, indexed by PathId.
/// Ids are assigned level by level (length 1 first) and lexicographically
/// within a level, so id order is (length, sequence) order. Single-node
/// paths get ids 0..n-1. Message-flood bookkeeping runs entirely on these
/// ids: extending a path by one hop, finding its parent prefix, and listing
/// all paths of a given length into a given terminal are O(1) lookups.
class PathIndex {
 public:
  explicit PathIndex(const Graph& g);

  int n() const { return n_; }
  int count() const { return static_cast<int>(parent_.size()); }

  PathId single(NodeId v) const { return v; }
  /// Id of path + w, or kNoPath when w is already on the path or not
  /// adjacent to its terminal.
  PathId extend(PathId p, NodeId w) const { return ext_[static_cast<size_t>(p) * n_ + w]; }
  PathId parent(PathId p) const { return parent_[p]; }
  NodeId terminal(PathId p) const { return last_[p]; }
  NodeId source(PathId p) const { return src_[p]; }
  int length(PathId p) const { return len_[p]; }
  Mask node_mask(PathId p) const { return mask_[p]; }
  Mask internal_mask(PathId p) const {
    return mask_[p] & ~(bit_of(src_[p]) | bit_of(last_[p]));
  }

  /// All path ids of the given length (node count) ending at v, ascending.
  const std::vector<PathId>& by_len_terminal(int len, NodeId v) const {
    return by_len_terminal_[static_cast<size_t>(len) * n_ + v];
  }

  /// Id of the sequence if it is a simple path of the graph, else kNoPath.
  PathId resolve(std::span<const NodeId> seq) const;
  std::vector<NodeId> sequence(PathId p) const;

 private:
  int n_;
  std::vector<PathId> parent_;
  std::vector<std::uint8_t> last_;
  std::vector<std::uint8_t> src_;
  std::vector<std::uint8_t> len_;
  std::vector<Mask> mask_;
  std::vector<PathId> ext_;
  std::vector<std::vector<PathId>> by_len_terminal_;
};

}  // namespace byzcast
