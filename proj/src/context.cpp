#include "byzcast/context.hpp"

#include <string>

namespace byzcast {

SimContext::SimContext(Graph graph, int f)
    : g_(std::move(graph)), f_(f), idx_(g_), candidates_(enumerate_candidate_sets(g_.n(), f)) {
  const int n = g_.n();

  pexcl_.assign(static_cast<size_t>(candidates_.size()) * n * n, kNoPath);
  for (const CandidateSet& cs : candidates_) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        Path p;
        try {
          p = path_excluding(g_, u, v, cs.members);
        } catch (const NoPathError& e) {
          throw NoPathError("no path from " + std::to_string(u) + " to " +
                            std::to_string(v) + " excluding candidate set #" +
                            std::to_string(cs.label) +
                            " (graph violates the connectivity hypothesis)");
        }
        PathId pid = idx_.resolve(p.nodes);
        if (pid == kNoPath) throw std::logic_error("path_excluding returned an unindexed path");
        pexcl_[(static_cast<size_t>(cs.label) * n + u) * n + v] = pid;
      }
    }
  }

  expected_.assign(static_cast<size_t>(n) * n, {});
  for (auto& per_round : expected_) per_round.assign(static_cast<size_t>(n) + 1, {});
  for (int len = 2; len <= n; ++len) {
    for (NodeId v = 0; v < n; ++v) {
      for (PathId key : idx_.by_len_terminal(len, v)) {
        NodeId u = idx_.terminal(idx_.parent(key));
        expected_[static_cast<size_t>(v) * n + u][len - 1].push_back(key);
      }
    }
  }
}

}  // namespace byzcast
