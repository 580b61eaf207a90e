#include "byzcast/verifier.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace byzcast {

namespace {

Mask faulty_mask_of(const std::vector<NodeId>& faulty) {
  Mask m = 0;
  for (NodeId v : faulty) m |= bit_of(v);
  return m;
}

std::string mask_to_string(Mask m, int n) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (NodeId v = 0; v < n; ++v) {
    if (!mask_has(m, v)) continue;
    if (!first) out << ',';
    out << v;
    first = false;
  }
  out << '}';
  return out.str();
}

// Non-faulty stores and locked-in origination bits of one iteration,
// reconstructed from the transmission log with the documented acceptance
// rules (kept separate from the protocol implementation on purpose).
struct IterationReplay {
  std::vector<std::int8_t> flooded;             // per node
  std::vector<std::vector<std::int8_t>> store;  // per node, by PathId; faulty empty
  // Keys recorded at each node in round r (genuine or substituted) that are
  // due for forwarding in round r+1.
  std::vector<std::vector<std::vector<PathId>>> owed;  // [node][round]
};

IterationReplay replay_iteration(const SimContext& ctx,
                                 const IterationRecord& iter,
                                 Mask faulty_mask) {
  const int n = ctx.n();
  const PathIndex& idx = ctx.index();
  IterationReplay rep;
  rep.flooded.assign(n, -1);
  rep.store.assign(n, {});
  rep.owed.assign(n, std::vector<std::vector<PathId>>(n + 1));

  for (const NodeIterationRecord& rec : iter.nodes) {
    if (rec.node < 0 || rec.node >= n) continue;
    rep.store[rec.node].assign(idx.count(), -1);
    rep.store[rec.node][idx.single(rec.node)] =
        static_cast<std::int8_t>(rec.gamma_start);
  }

  if (!iter.rounds.empty()) {
    for (const Transmission& t : iter.rounds[0].transmissions) {
      if (t.sender < 0 || t.sender >= n) continue;
      if (rep.flooded[t.sender] != -1) continue;
      if (t.q == idx.single(t.sender)) rep.flooded[t.sender] = t.body;
    }
  }
  for (std::int8_t& b : rep.flooded)
    if (b == -1) b = 0;

  const int rounds = std::min<int>(n, static_cast<int>(iter.rounds.size()));
  for (int round = 1; round <= rounds; ++round) {
    for (const Transmission& t : iter.rounds[round - 1].transmissions) {
      if (t.sender < 0 || t.sender >= n) continue;
      if (t.q == kNoPath || t.claimed_len != round - 1) continue;
      for (NodeId w : ctx.graph().neighbors(t.sender)) {
        if (rep.store[w].empty()) continue;  // faulty or unrecorded node
        PathId key = idx.extend(t.q, w);
        if (key == kNoPath) continue;
        if (rep.store[w][key] != -1) continue;
        rep.store[w][key] = static_cast<std::int8_t>(t.body);
        if (idx.length(key) < n) rep.owed[w][round].push_back(key);
      }
    }
    if (round >= n) continue;
    for (NodeId v = 0; v < n; ++v) {
      if (rep.store[v].empty()) continue;
      for (NodeId u : ctx.graph().neighbors(v)) {
        for (PathId key : ctx.expected_keys(v, u, round)) {
          if (rep.store[v][key] != -1) continue;
          rep.store[v][key] = 0;
          if (idx.length(key) < n) rep.owed[v][round].push_back(key);
        }
      }
    }
  }
  (void)faulty_mask;
  return rep;
}

Mask true_zero_set(const IterationReplay& rep) {
  Mask z = 0;
  for (size_t v = 0; v < rep.flooded.size(); ++v)
    if (rep.flooded[v] == 0) z |= bit_of(static_cast<NodeId>(v));
  return z;
}

// One covering iteration's agreement checks: identical end states and
// every node's partition matching the true flooded sets.
void lemma_agreement_iter(const SimContext& ctx, const IterationRecord& iter,
                          const IterationReplay& rep,
                          std::vector<Violation>& out) {
  const int n = ctx.n();
  const Mask all = (Mask{1} << n) - 1;
  const Mask z_true = true_zero_set(rep);
  for (const NodeIterationRecord& rec : iter.nodes) {
    if (rec.zero_set != z_true)
      out.push_back({iter.label, rec.node,
                     "recorded zero set " + mask_to_string(rec.zero_set, n) +
                         " differs from flooded-0 set " +
                         mask_to_string(z_true, n)});
    if (rec.one_set != (all & ~z_true))
      out.push_back({iter.label, rec.node,
                     "recorded one set " + mask_to_string(rec.one_set, n) +
                         " differs from flooded-1 set " +
                         mask_to_string(all & ~z_true, n)});
  }
  std::optional<Bit> common;
  for (const NodeIterationRecord& rec : iter.nodes) {
    if (!common) common = rec.gamma_end;
    if (rec.gamma_end != *common) {
      out.push_back({iter.label, rec.node,
                     "end states diverge in a covering iteration"});
      break;
    }
  }
}

void post_agreement_iter(const IterationRecord& iter,
                         std::vector<Violation>& out) {
  std::optional<Bit> common;
  bool uniform = true;
  for (const NodeIterationRecord& rec : iter.nodes) {
    if (!common) common = rec.gamma_start;
    uniform = uniform && rec.gamma_start == *common && rec.gamma_end == *common;
  }
  if (!uniform)
    out.push_back({iter.label, -1, "states changed after an agreement iteration"});
}

void observation_iter(const SimContext& ctx, const IterationRecord& iter,
                      const IterationReplay& rep, Mask fm,
                      std::vector<Violation>& out) {
  const int n = ctx.n();
  const PathIndex& idx = ctx.index();

  // Local-broadcast atomicity on explicitly logged delivery sets.
  for (size_t r = 0; r < iter.rounds.size(); ++r) {
    for (const Transmission& t : iter.rounds[r].transmissions) {
      if (t.delivered_to.empty()) continue;
      if (t.sender < 0 || t.sender >= n ||
          t.delivered_to != ctx.graph().neighbors(t.sender))
        out.push_back({iter.label, t.sender,
                       "delivery set of a round-" + std::to_string(r + 1) +
                           " broadcast is not the sender's neighborhood"});
    }
  }

  // Honest senders: on schedule, current label, body from own store, and
  // exactly the forwards owed from the previous round.
  const int rounds = std::min<int>(n, static_cast<int>(iter.rounds.size()));
  for (int r = 1; r <= rounds; ++r) {
    std::vector<std::vector<PathId>> sent(n);
    for (const Transmission& t : iter.rounds[r - 1].transmissions) {
      if (t.sender < 0 || t.sender >= n || mask_has(fm, t.sender)) continue;
      if (t.q == kNoPath || t.label != iter.label || t.claimed_len != r - 1) {
        out.push_back({iter.label, t.sender,
                       "non-faulty sender emitted a malformed, off-schedule, "
                       "or relabelled message in round " + std::to_string(r)});
        continue;
      }
      sent[t.sender].push_back(t.q);
      const std::int8_t held = rep.store[t.sender].empty()
                                   ? std::int8_t{-1}
                                   : rep.store[t.sender][t.q];
      if (held == -1 || static_cast<Bit>(held) != t.body)
        out.push_back({iter.label, t.sender,
                       "non-faulty sender broadcast a body differing from its "
                       "recorded value in round " + std::to_string(r)});
    }
    for (NodeId v = 0; v < n; ++v) {
      if (mask_has(fm, v) || rep.store[v].empty()) continue;
      std::vector<PathId> owed = r == 1 ? std::vector<PathId>{idx.single(v)}
                                        : rep.owed[v][r - 1];
      std::sort(owed.begin(), owed.end());
      std::sort(sent[v].begin(), sent[v].end());
      if (owed != sent[v])
        out.push_back({iter.label, v,
                       "non-faulty sender's round-" + std::to_string(r) +
                           " broadcasts differ from the forwards owed"});
    }
  }

  // The observation proper: fault-free paths carry the origin's bit.
  for (const NodeIterationRecord& rec : iter.nodes) {
    const NodeId v = rec.node;
    if (v < 0 || v >= n || rep.store[v].empty()) continue;
    for (int len = 1; len <= n; ++len) {
      for (PathId key : idx.by_len_terminal(len, v)) {
        const std::int8_t held = rep.store[v][key];
        if (held == -1) {
          out.push_back({iter.label, v, "store not total after the flood"});
          continue;
        }
        if (idx.internal_mask(key) & fm) continue;
        if (static_cast<Bit>(held) !=
            static_cast<Bit>(rep.flooded[idx.source(key)]))
          out.push_back({iter.label, v,
                         "value along fault-free path differs from the bit "
                         "flooded by node " + std::to_string(idx.source(key))});
      }
    }
  }
}

}  // namespace

bool check_agreement(const std::vector<Bit>& decisions,
                     const std::vector<NodeId>& faulty) {
  Mask fm = faulty_mask_of(faulty);
  std::optional<Bit> seen;
  for (size_t v = 0; v < decisions.size(); ++v) {
    if (mask_has(fm, static_cast<NodeId>(v))) continue;
    if (!seen) seen = decisions[v];
    if (*seen != decisions[v]) return false;
  }
  return true;
}

bool check_validity(const std::vector<Bit>& inputs,
                    const std::vector<Bit>& decisions,
                    const std::vector<NodeId>& faulty) {
  Mask fm = faulty_mask_of(faulty);
  bool has_zero = false, has_one = false;
  for (size_t v = 0; v < inputs.size(); ++v) {
    if (mask_has(fm, static_cast<NodeId>(v))) continue;
    (inputs[v] ? has_one : has_zero) = true;
  }
  if (decisions.size() != inputs.size()) return false;
  for (size_t v = 0; v < decisions.size(); ++v) {
    if (mask_has(fm, static_cast<NodeId>(v))) continue;
    if (decisions[v] ? !has_one : !has_zero) return false;
  }
  return true;
}

bool check_termination(const Trace& trace, int n, int f) {
  if (static_cast<Label>(trace.iterations.size()) !=
      expected_iteration_count(n, f))
    return false;
  for (const IterationRecord& iter : trace.iterations)
    if (static_cast<int>(iter.rounds.size()) != n) return false;
  return static_cast<int>(trace.decisions.size()) == n;
}

std::vector<Violation> check_lemma_validity(const Trace& trace) {
  std::vector<Violation> out;
  for (const IterationRecord& iter : trace.iterations) {
    bool start_zero = false, start_one = false;
    for (const NodeIterationRecord& rec : iter.nodes)
      (rec.gamma_start ? start_one : start_zero) = true;
    for (const NodeIterationRecord& rec : iter.nodes) {
      if (rec.gamma_end ? !start_one : !start_zero)
        out.push_back({iter.label, rec.node,
                       "end state " + std::to_string(rec.gamma_end) +
                           " matches no non-faulty start state"});
    }
  }
  return out;
}

std::vector<Violation> check_lemma_agreement(const Trace& trace,
                                             const std::vector<NodeId>& faulty,
                                             const SimContext& ctx) {
  std::vector<Violation> out;
  const Mask fm = faulty_mask_of(faulty);
  bool agreement_seen = false;
  for (const IterationRecord& iter : trace.iterations) {
    if (agreement_seen) post_agreement_iter(iter, out);
    if ((fm & ~iter.candidate.mask) != 0) continue;
    IterationReplay rep = replay_iteration(ctx, iter, fm);
    lemma_agreement_iter(ctx, iter, rep, out);
    agreement_seen = true;
  }
  return out;
}

std::vector<Violation> check_lemma_agreement(const Trace& trace,
                                             const std::vector<NodeId>& faulty) {
  SimContext ctx(make_graph(trace.scenario.graph_spec), trace.scenario.f);
  return check_lemma_agreement(trace, faulty, ctx);
}

std::vector<Violation> check_observation_reliable(const Trace& trace,
                                                  const SimContext& ctx) {
  std::vector<Violation> out;
  const Mask fm = trace.scenario.faulty_mask();
  for (const IterationRecord& iter : trace.iterations) {
    IterationReplay rep = replay_iteration(ctx, iter, fm);
    observation_iter(ctx, iter, rep, fm, out);
  }
  return out;
}

std::vector<Violation> check_observation_reliable(const Trace& trace) {
  SimContext ctx(make_graph(trace.scenario.graph_spec), trace.scenario.f);
  return check_observation_reliable(trace, ctx);
}

Verdict verify_trace(const Trace& trace, const SimContext& ctx) {
  Verdict v;
  v.agreement = check_agreement(trace.decisions, trace.scenario.faulty);
  v.validity = check_validity(trace.scenario.inputs, trace.decisions,
                              trace.scenario.faulty);
  v.termination = check_termination(trace, ctx.n(), trace.scenario.f);
  v.lemma_validity_violations = check_lemma_validity(trace);

  // Single replay per iteration feeds both the agreement and observation
  // checks.
  const Mask fm = trace.scenario.faulty_mask();
  bool agreement_seen = false;
  for (const IterationRecord& iter : trace.iterations) {
    if (agreement_seen) post_agreement_iter(iter, v.lemma_agreement_violations);
    IterationReplay rep = replay_iteration(ctx, iter, fm);
    if ((fm & ~iter.candidate.mask) == 0) {
      lemma_agreement_iter(ctx, iter, rep, v.lemma_agreement_violations);
      agreement_seen = true;
    }
    observation_iter(ctx, iter, rep, fm, v.observation_violations);
  }
  return v;
}

Verdict verify_trace(const Trace& trace) {
  SimContext ctx(make_graph(trace.scenario.graph_spec), trace.scenario.f);
  return verify_trace(trace, ctx);
}

bool oracle_disjoint_paths(const Graph& g, std::span<const NodeId> sources,
                           NodeId v, std::span<const NodeId> forbidden, int k) {
  if (k <= 0) return true;
  Mask src_mask = 0, forb_mask = 0;
  for (NodeId s : sources) src_mask |= bit_of(s);
  for (NodeId x : forbidden) forb_mask |= bit_of(x);

  // Internal nodes may use neither the forbidden set nor any source.
  const Mask blocked_internal = forb_mask | src_mask | bit_of(v);

  std::vector<NodeId> srcs;
  for (NodeId s = 0; s < g.n(); ++s)
    if (mask_has(src_mask, s)) srcs.push_back(s);

  // Distinct internal-node masks of admissible s -> v paths, per source.
  std::vector<std::vector<Mask>> options(srcs.size());
  for (size_t i = 0; i < srcs.size(); ++i) {
    if (srcs[i] == v) continue;
    std::vector<Mask> found;
    std::vector<std::pair<NodeId, Mask>> stack{{srcs[i], 0}};
    while (!stack.empty()) {
      auto [at, internals] = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(at)) {
        if (w == v) {
          found.push_back(internals);
          continue;
        }
        if (mask_has(blocked_internal | internals, w)) continue;
        stack.push_back({w, internals | bit_of(w)});
      }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    options[i] = std::move(found);
  }

  // Backtracking: pick k sources with pairwise-disjoint internal masks.
  auto search = [&](auto&& self, size_t from, int chosen, Mask used) -> bool {
    if (chosen == k) return true;
    if (srcs.size() - from < static_cast<size_t>(k - chosen)) return false;
    for (size_t i = from; i < srcs.size(); ++i) {
      for (Mask m : options[i]) {
        if (m & used) continue;
        if (self(self, i + 1, chosen + 1, used | m)) return true;
      }
    }
    return false;
  };
  return search(search, 0, 0, 0);
}

namespace {

bool disconnected_without(const Graph& g, Mask removed) {
  NodeId start = -1;
  int remaining = 0;
  for (NodeId v = 0; v < g.n(); ++v) {
    if (mask_has(removed, v)) continue;
    ++remaining;
    if (start == -1) start = v;
  }
  if (remaining <= 1) return false;
  Mask seen = bit_of(start);
  std::vector<NodeId> stack{start};
  int visited = 1;
  while (!stack.empty()) {
    NodeId a = stack.back();
    stack.pop_back();
    for (NodeId b : g.neighbors(a)) {
      if (mask_has(removed | seen, b)) continue;
      seen |= bit_of(b);
      ++visited;
      stack.push_back(b);
    }
  }
  return visited != remaining;
}

bool separates(const Graph& g, Mask removed, NodeId u, NodeId v) {
  Mask seen = bit_of(u);
  std::vector<NodeId> stack{u};
  while (!stack.empty()) {
    NodeId a = stack.back();
    stack.pop_back();
    for (NodeId b : g.neighbors(a)) {
      if (mask_has(removed | seen, b)) continue;
      if (b == v) return false;
      seen |= bit_of(b);
      stack.push_back(b);
    }
  }
  return true;
}

}  // namespace

int oracle_vertex_connectivity(const Graph& g) {
  const int n = g.n();
  int best = n - 1;
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    int size = mask_count(s);
    if (size > n - 2 || size >= best) continue;
    if (disconnected_without(g, s)) best = size;
  }
  return best;
}

int oracle_min_uv_cut(const Graph& g, NodeId u, NodeId v) {
  if (u == v || g.adjacent(u, v))
    throw BadParams("oracle_min_uv_cut expects a non-adjacent pair");
  const int n = g.n();
  int best = n - 2;
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    if (mask_has(s, u) || mask_has(s, v)) continue;
    int size = mask_count(s);
    if (size >= best) continue;
    if (separates(g, s, u, v)) best = size;
  }
  return best;
}

}  // namespace byzcast
