#include "byzcast/adversary.hpp"

#include <algorithm>
#include <limits>

#include "byzcast/simulator.hpp"

namespace byzcast {

std::string to_string(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::conforming: return "conforming";
    case AdversaryKind::crash_silent: return "crash_silent";
    case AdversaryKind::flip_body: return "flip_body";
    case AdversaryKind::equivocate_attempt: return "equivocate_attempt";
    case AdversaryKind::path_forger: return "path_forger";
    case AdversaryKind::random_seeded: return "random_seeded";
    case AdversaryKind::scripted: return "scripted";
  }
  return "?";
}

std::optional<AdversaryKind> adversary_kind_from_string(const std::string& s) {
  for (AdversaryKind k :
       {AdversaryKind::conforming, AdversaryKind::crash_silent,
        AdversaryKind::flip_body, AdversaryKind::equivocate_attempt,
        AdversaryKind::path_forger, AdversaryKind::random_seeded,
        AdversaryKind::scripted})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::uint64_t adversary_draw(std::uint64_t seed, NodeId node, int round,
                             std::uint64_t draw_index) {
  // splitmix64 over the packed key
  std::uint64_t x = seed;
  x ^= 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(node) + 1);
  x ^= 0xbf58476d1ce4e5b9ull * (static_cast<std::uint64_t>(round) + 1);
  x += draw_index * 0x94d049bb133111ebull;
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

Message entry_to_message(const SimContext& ctx, Label label,
                         const OutboxEntry& e) {
  const PathIndex& idx = ctx.index();
  PathId claimed = idx.parent(e.key);
  Path p;
  if (claimed != kNoPath) p.nodes = idx.sequence(claimed);
  return Message{label, e.body, std::move(p)};
}

std::vector<Message> conforming_messages(const RunView& view, Label label) {
  std::vector<Message> out;
  out.reserve(view.conforming.size());
  for (const OutboxEntry& e : view.conforming)
    out.push_back(entry_to_message(view.ctx, label, e));
  return out;
}

std::vector<Message> plan_flip_body(const RunView& view, NodeId w, int round,
                                    Label label) {
  if (round == 1) {
    Bit negated = view.scenario.inputs[w] ^ 1;
    return {Message{label, negated, Path{}}};
  }
  std::vector<Message> out = conforming_messages(view, label);
  for (Message& m : out) m.body ^= 1;
  return out;
}

std::vector<Message> plan_equivocate(const RunView& view, NodeId w, int round,
                                     Label label) {
  (void)w;
  if (round == 1)
    return {Message{label, 0, Path{}}, Message{label, 1, Path{}}};
  std::vector<Message> out;
  for (const OutboxEntry& e : view.conforming) {
    Message m = entry_to_message(view.ctx, label, e);
    Message twin = m;
    twin.body ^= 1;
    out.push_back(std::move(m));
    out.push_back(std::move(twin));
  }
  return out;
}

std::vector<Message> plan_path_forger(const RunView& view, NodeId w, int round,
                                      Label label) {
  if (round == 1) return conforming_messages(view, label);
  const PathIndex& idx = view.ctx.index();
  std::vector<Message> out;

  // Claim up to two real histories ending next to w, carrying the negation
  // of what their origin actually locked in at round 1. Emitted before the
  // conforming forwards so the forged body wins the first-message rule.
  const std::vector<PathId>& reachable = idx.by_len_terminal(round, w);
  for (size_t i = 0; i < reachable.size() && i < 2; ++i) {
    PathId q = reachable[i];
    Bit true_bit = static_cast<Bit>(view.flooded[idx.source(q)]);
    Path claimed{idx.sequence(idx.parent(q))};
    out.push_back(Message{label, static_cast<Bit>(true_bit ^ 1), std::move(claimed)});
  }

  std::vector<Message> honest = conforming_messages(view, label);
  out.insert(out.end(), honest.begin(), honest.end());

  // One fabricated history per round: a sequence of the right length whose
  // extension by w is not a path of G, so every receiver must discard it.
  PathId fake = std::numeric_limits<PathId>::max();
  const Graph& g = view.ctx.graph();
  for (NodeId t = 0; t < g.n(); ++t) {
    for (PathId p : idx.by_len_terminal(round - 1, t)) {
      if (mask_has(idx.node_mask(p), w) || !g.adjacent(t, w)) {
        fake = std::min(fake, p);
        break;
      }
    }
  }
  if (fake != std::numeric_limits<PathId>::max())
    out.push_back(Message{label, 1, Path{idx.sequence(fake)}});
  return out;
}

std::vector<Message> plan_random(const RunView& view, NodeId w, int round,
                                 Label label, std::uint64_t seed) {
  const PathIndex& idx = view.ctx.index();
  std::uint64_t di = 0;
  auto draw = [&] { return adversary_draw(seed, w, round, di++); };

  std::vector<Message> out;
  switch (draw() % 4) {
    case 0:
      out = conforming_messages(view, label);
      break;
    case 1:
      break;  // silent this round
    case 2:
      out = conforming_messages(view, label);
      for (Message& m : out) m.body ^= 1;
      break;
    case 3:
      for (const OutboxEntry& e : view.conforming) {
        Message m = entry_to_message(view.ctx, label, e);
        switch (draw() % 4) {
          case 0: out.push_back(std::move(m)); break;
          case 1: m.body ^= 1; out.push_back(std::move(m)); break;
          case 2: break;  // drop
          case 3: {
            Message twin = m;
            twin.body ^= 1;
            out.push_back(std::move(m));
            out.push_back(std::move(twin));
            break;
          }
        }
      }
      break;
  }
  std::uint64_t j = draw();
  if (j % 2 == 0) {
    // One junk message: arbitrary label, body, and claimed path; exercises
    // the label-rewrite, schedule, and path-validity rules at receivers.
    Label junk_label = static_cast<Label>((j >> 1) %
        static_cast<std::uint64_t>(view.ctx.iteration_count() + 2));
    Bit junk_body = static_cast<Bit>((j >> 8) & 1);
    PathId p = static_cast<PathId>((j >> 16) % static_cast<std::uint64_t>(idx.count()));
    out.push_back(Message{junk_label, junk_body, Path{idx.sequence(p)}});
  }
  return out;
}

std::vector<Message> plan_scripted(const AdversaryStrategy& strategy, NodeId w,
                                   int round, Label label) {
  std::vector<Message> out;
  for (const ScriptEntry& e : strategy.script) {
    if (e.node != w || e.round != round) continue;
    if (e.iteration != -1 && e.iteration != label) continue;
    for (Message m : e.messages) {
      if (m.label == -1) m.label = label;
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace

std::vector<Message> plan_round(const AdversaryStrategy& strategy,
                                const RunView& view, NodeId w, int round,
                                Label label) {
  switch (strategy.kind) {
    case AdversaryKind::conforming:
      return conforming_messages(view, label);
    case AdversaryKind::crash_silent:
      return {};
    case AdversaryKind::flip_body:
      return plan_flip_body(view, w, round, label);
    case AdversaryKind::equivocate_attempt:
      return plan_equivocate(view, w, round, label);
    case AdversaryKind::path_forger:
      return plan_path_forger(view, w, round, label);
    case AdversaryKind::random_seeded:
      return plan_random(view, w, round, label,
                         strategy.seed.value_or(view.scenario.seed));
    case AdversaryKind::scripted:
      return plan_scripted(strategy, w, round, label);
  }
  return {};
}

}  // namespace byzcast
