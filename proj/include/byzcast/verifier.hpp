#pragma once

#include <span>
#include <vector>

#include "byzcast/simulator.hpp"

namespace byzcast {

/// All non-faulty decisions identical (vacuously true for <= 1 of them).
bool check_agreement(const std::vector<Bit>& decisions,
                     const std::vector<NodeId>& faulty);

/// Every non-faulty decision appears among the non-faulty inputs.
bool check_validity(const std::vector<Bit>& inputs,
                    const std::vector<Bit>& decisions,
                    const std::vector<NodeId>& faulty);

/// Exactly sum_{k<=f} C(n,k) iterations, n flood rounds each, and a decision
/// entry for every node.
bool check_termination(const Trace& trace, int n, int f);

/// Per iteration, every non-faulty end state equals some non-faulty start
/// state of that iteration.
std::vector<Violation> check_lemma_validity(const Trace& trace);

/// In every iteration whose candidate set covers the faulty set: all
/// non-faulty end states coincide, every recorded zero/one partition equals
/// the true flooded sets, and states stay put from the first such iteration
/// on.
std::vector<Violation> check_lemma_agreement(const Trace& trace,
                                             const std::vector<NodeId>& faulty);
std::vector<Violation> check_lemma_agreement(const Trace& trace,
                                             const std::vector<NodeId>& faulty,
                                             const SimContext& ctx);

/// Replays every non-faulty store from the transmission log and checks that
/// each value recorded along an internally fault-free path equals the bit
/// its origin locked in at round 1 (for a faulty origin: the first body it
/// broadcast with an empty path, or the substituted 0). Also checks that
/// non-faulty transmissions are honest (on schedule, current label, body
/// matching the sender's store, exactly the forwards owed) and that every
/// logged delivery set is the sender's neighborhood.
std::vector<Violation> check_observation_reliable(const Trace& trace);
std::vector<Violation> check_observation_reliable(const Trace& trace,
                                                  const SimContext& ctx);

Verdict verify_trace(const Trace& trace);
Verdict verify_trace(const Trace& trace, const SimContext& ctx);

/// Exhaustive backtracking search for k source/internal-disjoint paths from
/// `sources` to v avoiding `forbidden` internally. Independent of the
/// flow-based construction; intended for desk-scale graphs.
bool oracle_disjoint_paths(const Graph& g, std::span<const NodeId> sources,
                           NodeId v, std::span<const NodeId> forbidden, int k);

/// Brute-force minimum over vertex subsets S, |S| <= n-2, with g - S
/// disconnected; n-1 when no such subset exists.
int oracle_vertex_connectivity(const Graph& g);

/// Brute-force minimum u-v separator size for a non-adjacent pair.
int oracle_min_uv_cut(const Graph& g, NodeId u, NodeId v);

}  // namespace byzcast
