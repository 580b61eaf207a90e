#include "byzcast/simulator.hpp"

#include <algorithm>

namespace byzcast {

Label expected_iteration_count(int n, int f) {
  Label total = 0;
  Label c = 1;  // C(n, k)
  for (int k = 0; k <= f; ++k) {
    total += c;
    c = c * (n - k) / (k + 1);
  }
  return total;
}

std::vector<NodeId> Transmission::claimed_path(const PathIndex& idx) const {
  if (q == kNoPath) return raw_claimed;
  PathId claimed = idx.parent(q);
  if (claimed == kNoPath) return {};
  return idx.sequence(claimed);
}

void Scenario::validate(const Graph& g) const {
  const int n = g.n();
  if (f < 0 || f >= n) throw ScenarioError("need 0 <= f < n");
  if (static_cast<int>(inputs.size()) != n)
    throw ScenarioError("inputs must cover all " + std::to_string(n) + " nodes");
  for (Bit b : inputs)
    if (b > 1) throw ScenarioError("inputs must be bits");
  if (static_cast<int>(faulty.size()) > f)
    throw ScenarioError("more than f faulty nodes");
  if (!std::is_sorted(faulty.begin(), faulty.end()))
    throw ScenarioError("faulty set must be sorted");
  Mask fm = 0;
  for (NodeId v : faulty) {
    if (v < 0 || v >= n) throw ScenarioError("faulty node out of range");
    if (mask_has(fm, v)) throw ScenarioError("duplicate faulty node");
    fm |= bit_of(v);
  }
  if (adversary.kind == AdversaryKind::scripted) {
    for (const ScriptEntry& e : adversary.script) {
      if (!mask_has(fm, e.node))
        throw ScenarioError("script entry for non-faulty node " +
                            std::to_string(e.node));
      if (e.round < 1) throw ScenarioError("script round must be >= 1");
    }
  }
}

namespace {

// Locked-in origination bit: the body of the sender's first round-1
// broadcast with an empty claimed path, or the substituted default 0.
void derive_flooded(const SimContext& ctx, const RoundLog& round1,
                    std::vector<std::int8_t>& flooded) {
  for (const Transmission& t : round1.transmissions) {
    if (flooded[t.sender] != -1) continue;
    if (t.q == ctx.index().single(t.sender)) flooded[t.sender] = t.body;
  }
  for (std::int8_t& b : flooded)
    if (b == -1) b = 0;
}

}  // namespace

IterationRecord run_iteration(const SimContext& ctx, const CandidateSet& F,
                              std::vector<NodeState>& states,
                              const Scenario& scenario, DisjointPathMemo* memo) {
  const int n = ctx.n();
  const Label label = F.label;
  const Mask faulty_mask = scenario.faulty_mask();

  IterationRecord rec;
  rec.label = label;
  rec.candidate = F;

  for (NodeState& s : states) s.store.reset(label, ctx.index());

  std::vector<std::vector<OutboxEntry>> outbox(n), next_outbox(n);
  std::vector<std::int8_t> flooded(n, -1);

  for (int round = 1; round <= n; ++round) {
    if (round == 1) {
      for (NodeId v = 0; v < n; ++v) {
        Message m = originate(states[v], ctx, label);
        outbox[v].push_back({m.body, ctx.index().single(v)});
      }
    } else {
      outbox = std::move(next_outbox);
    }
    next_outbox.assign(n, {});

    RoundLog log;
    for (NodeId v = 0; v < n; ++v) {
      if (!mask_has(faulty_mask, v)) {
        for (const OutboxEntry& e : outbox[v]) {
          Transmission t;
          t.sender = v;
          t.label = label;
          t.body = e.body;
          t.q = e.key;
          t.claimed_len = ctx.index().length(e.key) - 1;
          log.transmissions.push_back(std::move(t));
        }
      } else {
        RunView view{ctx, scenario, F, states, rec.rounds,
                     std::span<const std::int8_t>(flooded),
                     std::span<const OutboxEntry>(outbox[v])};
        for (Message& m : plan_round(scenario.adversary, view, v, round, label)) {
          Transmission t;
          t.sender = v;
          t.label = m.label;
          t.body = m.body;
          std::vector<NodeId> q_seq = m.path.nodes;
          q_seq.push_back(v);
          t.q = ctx.index().resolve(q_seq);
          t.claimed_len = m.path.length();
          if (t.q == kNoPath) t.raw_claimed = std::move(m.path.nodes);
          log.transmissions.push_back(std::move(t));
        }
      }
    }

    if (round == 1) derive_flooded(ctx, log, flooded);

    // Local broadcast: every transmission reaches exactly the sender's
    // neighborhood; receivers handle the round's traffic in global order.
    for (const Transmission& t : log.transmissions) {
      for (NodeId w : ctx.graph().neighbors(t.sender)) {
        ReceiveResult res =
            deliver(states[w], ctx, t.q, t.body, t.label, t.claimed_len, round);
        if (res.forward) next_outbox[w].push_back(*res.forward);
      }
    }

    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : ctx.graph().neighbors(v)) {
        SubstitutionResult sub = substitute_silence(states[v], ctx, u, round, label);
        next_outbox[v].insert(next_outbox[v].end(), sub.forwards.begin(),
                              sub.forwards.end());
      }
    }

    rec.rounds.push_back(std::move(log));
    outbox.assign(n, {});
  }

  // Steps (b) and (c) on the final stores. Faulty nodes' shadows run the
  // same computation so a conforming adversary is indistinguishable from a
  // fault-free run.
  for (NodeId v = 0; v < n; ++v) {
    Partition part = compute_partition(states[v], ctx, F);
    CaseSelection sel =
        select_AB(part.zero_set, part.one_set, F, ctx.f(), n);
    Bit gamma_end = update_state(states[v], ctx, sel, F, ctx.f(), memo);
    if (!mask_has(faulty_mask, v)) {
      rec.nodes.push_back({v, states[v].gamma, gamma_end, sel.case_no,
                           part.zero_set, part.one_set, sel.keep_set,
                           sel.switch_set});
    }
    states[v].gamma = gamma_end;
  }
  return rec;
}

Trace run(const Scenario& scenario, const RunOptions& options,
          const SimContext* shared_ctx) {
  Graph g = make_graph(scenario.graph_spec);
  scenario.validate(g);
  if (!options.allow_large && (g.n() > 10 || scenario.f > 3))
    throw ScenarioError(
        "scenario exceeds the desk-scale guardrail (n <= 10, f <= 3); "
        "simple-path enumeration grows factorially — pass allow_large to "
        "override");

  std::optional<SimContext> own_ctx;
  const SimContext* ctx = shared_ctx;
  if (ctx) {
    if (!(ctx->graph() == g) || ctx->f() != scenario.f)
      throw std::logic_error("shared context does not match scenario");
  } else {
    own_ctx.emplace(g, scenario.f);
    ctx = &*own_ctx;
  }

  Trace trace;
  trace.scenario = scenario;
  trace.hypothesis_ok = check_theorem_condition(g, scenario.f);

  std::vector<NodeState> states(g.n());
  for (NodeId v = 0; v < g.n(); ++v) {
    states[v].id = v;
    states[v].input = scenario.inputs[v];
    states[v].gamma = scenario.inputs[v];
    states[v].is_faulty = scenario.is_faulty(v);
  }

  DisjointPathMemo memo;
  trace.iterations.reserve(ctx->candidates().size());
  for (const CandidateSet& F : ctx->candidates())
    trace.iterations.push_back(run_iteration(*ctx, F, states, scenario, &memo));

  trace.decisions.reserve(g.n());
  for (NodeId v = 0; v < g.n(); ++v) trace.decisions.push_back(decide(states[v]));
  return trace;
}

}  // namespace byzcast
