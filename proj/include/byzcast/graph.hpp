#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "byzcast/types.hpp"

namespace byzcast {

/// Undirected simple graph over nodes 0..n-1.
class Graph {
 public:
  Graph(int n, std::vector<std::pair<NodeId, NodeId>> edge_list);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  /// Edges normalized to u < v and sorted.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
  /// Sorted ascending.
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
  bool adjacent(NodeId u, NodeId v) const { return mask_has(adj_mask_[u], v); }
  Mask neighbor_mask(NodeId v) const { return adj_mask_[v]; }
  bool is_complete() const { return m() == n_ * (n_ - 1) / 2; }

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<Mask> adj_mask_;
};

/// Simple path as an ordered node sequence. A single node is a valid path.
struct Path {
  std::vector<NodeId> nodes;

  Path() = default;
  explicit Path(std::vector<NodeId> ns) : nodes(std::move(ns)) {}

  int length() const { return static_cast<int>(nodes.size()); }
  bool empty() const { return nodes.empty(); }
  NodeId source() const { return nodes.front(); }
  NodeId terminal() const { return nodes.back(); }

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

/// True iff `p` is nonempty, has pairwise-distinct entries, and every
/// consecutive pair is an edge of `g`.
bool is_simple_path(const Graph& g, std::span<const NodeId> p);

/// A hypothesized faulty set, |members| <= f, with its ordinal label.
struct CandidateSet {
  std::vector<NodeId> members;  // sorted
  Mask mask = 0;
  Label label = 0;

  bool contains(NodeId v) const { return mask_has(mask, v); }
  int size() const { return static_cast<int>(members.size()); }
};

int min_degree(const Graph& g);

/// Largest k such that g is k-connected: max-flow over the node-split
/// digraph, minimized over non-adjacent pairs; n-1 for complete graphs.
int vertex_connectivity(const Graph& g);

/// Max number of node-disjoint u-v paths for a non-adjacent pair (flow value).
int count_disjoint_uv_paths(const Graph& g, NodeId u, NodeId v);

/// vertex_connectivity(g) >= floor(3f/2)+1, min degree >= 2f, and
/// n > floor(3f/2)+1. For f = 0 this reduces to plain connectedness.
bool check_theorem_condition(const Graph& g, int f);

/// Shortest u->v path whose internal nodes avoid `excluded` (endpoints may be
/// in it); ties broken by lexicographic node-id sequence. u == v yields the
/// single-node path. Throws NoPathError when no such path exists.
Path path_excluding(const Graph& g, NodeId u, NodeId v,
                    std::span<const NodeId> excluded);

/// k paths from distinct members of `sources` to v, pairwise sharing no
/// source or internal node, internals avoiding `forbidden` and `sources`.
/// Unit-vertex-capacity max-flow from a virtual super-source, decomposed and
/// suffix-truncated at each path's last source. Deterministic. Throws
/// InsufficientPathsError when fewer than k exist.
std::vector<Path> disjoint_paths_excluding(const Graph& g,
                                           std::span<const NodeId> sources,
                                           NodeId v,
                                           std::span<const NodeId> forbidden,
                                           int k);

/// All subsets of {0..n-1} of size <= f, ordered by cardinality then
/// lexicographically by sorted members; label = position.
std::vector<CandidateSet> enumerate_candidate_sets(int n, int f);

// Graph families.
Graph make_complete(int n);
Graph make_cycle(int n);
/// Classic k-connected minimum-degree-k construction, 2 <= k < n.
Graph make_harary(int k, int n);
Graph make_circulant(int n, std::vector<int> offsets);

/// Edge-list text: first line "n m", then m lines "u v" with 0 <= u < v < n.
Graph parse_edge_list(std::string_view text);
std::string format_edge_list(const Graph& g);
Graph load_edge_list_file(const std::string& path);

/// How a graph was specified; kept alongside the resolved Graph so scenario
/// files round-trip verbatim.
struct GraphSpec {
  enum class Family { complete, cycle, harary, circulant, edge_list };
  Family family = Family::edge_list;
  int n = 0;
  int k = 0;                  // harary
  std::vector<int> offsets;   // circulant
  std::vector<std::pair<NodeId, NodeId>> edges;  // edge_list

  bool operator==(const GraphSpec&) const = default;
};

Graph make_graph(const GraphSpec& spec);

}  // namespace byzcast
