#include "byzcast/protocol.hpp"

#include <algorithm>

namespace byzcast {

void ValueStore::reset(Label label, const PathIndex& idx) {
  label_ = label;
  body_.assign(static_cast<size_t>(idx.count()), -1);
}

int ValueStore::recorded() const {
  int c = 0;
  for (std::int8_t b : body_) c += (b >= 0);
  return c;
}

std::optional<Bit> ValueStore::lookup(const PathIndex& idx,
                                      const Path& full_path) const {
  PathId key = idx.resolve(full_path.nodes);
  if (key == kNoPath || !has(key)) return std::nullopt;
  return get(key);
}

Message originate(NodeState& state, const SimContext& ctx, Label label) {
  state.store.set(ctx.index().single(state.id), state.gamma);
  return Message{label, state.gamma, Path{}};
}

ReceiveResult deliver(NodeState& state, const SimContext& ctx, PathId q,
                      Bit body, Label msg_label, int claimed_len, int round) {
  ReceiveResult r;
  r.label_rewritten = msg_label != state.store.label();
  if (q == kNoPath) {
    r.reject = RejectReason::malformed_path;
    return r;
  }
  const PathIndex& idx = ctx.index();
  PathId key = idx.extend(q, state.id);
  if (key == kNoPath) {
    // q is a simple path and ends at a neighbor, so the only way the
    // extension fails is the receiver sitting on the path already.
    r.reject = RejectReason::self_in_path;
    return r;
  }
  if (claimed_len != round - 1) {
    r.reject = RejectReason::off_schedule;
    return r;
  }
  if (state.store.has(key)) {
    r.reject = RejectReason::duplicate_key;
    return r;
  }
  state.store.set(key, body);
  r.accepted = true;
  r.recorded_key = key;
  r.recorded_body = body;
  if (idx.length(key) < ctx.n()) r.forward = OutboxEntry{body, key};
  return r;
}

ReceiveResult on_receive(NodeState& state, const SimContext& ctx, NodeId sender,
                         const Message& m, int round) {
  std::vector<NodeId> q_seq = m.path.nodes;
  q_seq.push_back(sender);
  PathId q = ctx.index().resolve(q_seq);
  return deliver(state, ctx, q, m.body, m.label, m.path.length(), round);
}

SubstitutionResult substitute_silence(NodeState& state, const SimContext& ctx,
                                      NodeId neighbor, int round, Label label) {
  if (label != state.store.label())
    throw std::logic_error("substitution label mismatch");
  SubstitutionResult out;
  if (round >= ctx.n()) return out;  // no expected paths of that length
  for (PathId key : ctx.expected_keys(state.id, neighbor, round)) {
    if (state.store.has(key)) continue;
    state.store.set(key, 0);
    out.recorded.push_back(key);
    if (ctx.index().length(key) < ctx.n()) out.forwards.push_back({0, key});
  }
  return out;
}

Partition compute_partition(const NodeState& state, const SimContext& ctx,
                            const CandidateSet& F) {
  Partition p;
  for (NodeId u = 0; u < ctx.n(); ++u) {
    PathId key = ctx.p_excluding(F.label, u, state.id);
    if (!state.store.has(key))
      throw std::logic_error("store not total at step (b)");
    if (state.store.get(key) == 0)
      p.zero_set |= bit_of(u);
    else
      p.one_set |= bit_of(u);
  }
  return p;
}

CaseSelection select_AB(Mask zero_set, Mask one_set, const CandidateSet& F,
                        int f, int n) {
  const Mask all = (Mask{1} << n) - 1;
  if ((zero_set | one_set) != all || (zero_set & one_set) != 0)
    throw std::logic_error("Z_v and N_v must partition V");
  CaseSelection sel;
  const int zf = mask_count(zero_set & F.mask);
  if (zf <= f / 2) {
    if (mask_count(one_set) > f) {
      sel = {one_set, zero_set, 1};
    } else {
      sel = {zero_set, one_set, 2};
    }
  } else {
    // |F| <= f forces |N_v ∩ F| <= f - floor(f/2) - 1 <= floor(f/2) here.
    if (mask_count(one_set & F.mask) > f / 2)
      throw std::logic_error("case 3/4 arithmetic violated");
    if (mask_count(zero_set) > f) {
      sel = {zero_set, one_set, 3};
    } else {
      sel = {one_set, zero_set, 4};
    }
  }
  return sel;
}

namespace {

std::vector<PathId> step_c_paths(const NodeState& state, const SimContext& ctx,
                                 const CaseSelection& sel, const CandidateSet& F,
                                 int f, DisjointPathMemo* memo) {
  const NodeId v = state.id;
  const int need = f + 1;
  const PathIndex& idx = ctx.index();

  if (sel.case_no == 2 || sel.case_no == 4) {
    // Degree >= 2f and |B_v| <= f (v included) leave f+1 neighbors in A_v;
    // the direct edges are the paths.
    std::vector<PathId> paths;
    for (NodeId a : ctx.graph().neighbors(v)) {
      if (!mask_has(sel.keep_set, a)) continue;
      paths.push_back(idx.extend(idx.single(a), v));
      if (static_cast<int>(paths.size()) == need) return paths;
    }
    throw PathConstructionFailed(
        "node " + std::to_string(v) + " has only " +
        std::to_string(paths.size()) + " neighbors in the keep set, needs " +
        std::to_string(need));
  }

  // Cases 1/3: sources are all of A_v ∩ F plus the smallest ids of A_v - F;
  // internals must avoid B_v ∩ (F - v).
  Mask source_mask = sel.keep_set & F.mask;
  for (NodeId a = 0; a < ctx.n() && mask_count(source_mask) < need; ++a)
    if (mask_has(sel.keep_set & ~F.mask, a)) source_mask |= bit_of(a);
  if (mask_count(source_mask) < need)
    throw PathConstructionFailed("keep set smaller than f+1 at node " +
                                 std::to_string(v));
  Mask forbidden_mask = sel.switch_set & F.mask & ~bit_of(v);

  const auto memo_key = std::make_tuple(v, source_mask, forbidden_mask);
  if (memo) {
    auto it = memo->find(memo_key);
    if (it != memo->end()) return it->second;
  }

  std::vector<NodeId> sources, forbidden;
  for (NodeId x = 0; x < ctx.n(); ++x) {
    if (mask_has(source_mask, x)) sources.push_back(x);
    if (mask_has(forbidden_mask, x)) forbidden.push_back(x);
  }
  std::vector<Path> found;
  try {
    found = disjoint_paths_excluding(ctx.graph(), sources, v, forbidden, need);
  } catch (const InsufficientPathsError& e) {
    throw PathConstructionFailed("only " + std::to_string(e.found) +
                                 " disjoint keep-set paths to node " +
                                 std::to_string(v) + ", needs " +
                                 std::to_string(need));
  }
  std::vector<PathId> paths;
  for (const Path& p : found) {
    PathId pid = idx.resolve(p.nodes);
    if (pid == kNoPath) throw std::logic_error("disjoint path not indexed");
    paths.push_back(pid);
  }
  if (memo) (*memo)[memo_key] = paths;
  return paths;
}

}  // namespace

Bit update_state(const NodeState& state, const SimContext& ctx,
                 const CaseSelection& sel, const CandidateSet& F, int f,
                 DisjointPathMemo* memo) {
  if (mask_has(sel.keep_set, state.id)) return state.gamma;

  std::vector<PathId> paths = step_c_paths(state, ctx, sel, F, f, memo);
  Bit first = 0;
  bool unanimous = true;
  for (size_t i = 0; i < paths.size(); ++i) {
    if (!state.store.has(paths[i]))
      throw std::logic_error("store not total at step (c)");
    Bit b = state.store.get(paths[i]);
    if (i == 0)
      first = b;
    else
      unanimous = unanimous && b == first;
  }
  return unanimous ? first : state.gamma;
}

Bit decide(const NodeState& state) { return state.gamma; }

}  // namespace byzcast
