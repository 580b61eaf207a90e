#pragma once

#include <vector>

#include "byzcast/graph.hpp"
#include "byzcast/path_index.hpp"
#include "byzcast/types.hpp"

namespace byzcast {

/// Everything derivable from (graph, f) alone, shared read-only by any
/// number of concurrent runs: the path universe, the canonical candidate-set
/// enumeration, the per-candidate-set excluded-path table for step (b), and
/// the per-(receiver, neighbor, round) expected-key lists that drive
/// silence substitution.
class SimContext {
 public:
  SimContext(Graph graph, int f);

  const Graph& graph() const { return g_; }
  int n() const { return g_.n(); }
  int f() const { return f_; }
  const PathIndex& index() const { return idx_; }
  const std::vector<CandidateSet>& candidates() const { return candidates_; }
  Label iteration_count() const { return static_cast<Label>(candidates_.size()); }

  /// Key id of P_uv for candidate set `label`: the canonical u->v path
  /// excluding the set, as chosen by path_excluding. Terminal is v.
  PathId p_excluding(Label label, NodeId u, NodeId v) const {
    return pexcl_[(static_cast<size_t>(label) * n() + u) * n() + v];
  }

  /// Store keys (full paths ending at v) whose penultimate hop is u and
  /// whose transmission is expected at `round`: len == round + 1.
  const std::vector<PathId>& expected_keys(NodeId v, NodeId u, int round) const {
    return expected_[static_cast<size_t>(v) * n() + u][round];
  }

 private:
  Graph g_;
  int f_;
  PathIndex idx_;
  std::vector<CandidateSet> candidates_;
  std::vector<PathId> pexcl_;
  std::vector<std::vector<std::vector<PathId>>> expected_;
};

}  // namespace byzcast
