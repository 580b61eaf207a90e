#include "byzcast/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace byzcast {

Graph::Graph(int n, std::vector<std::pair<NodeId, NodeId>> edge_list) : n_(n) {
  if (n < 2) throw BadParams("graph needs at least 2 nodes");
  if (n > kMaxNodes)
    throw BadParams("graph exceeds the supported maximum of " +
                    std::to_string(kMaxNodes) + " nodes");
  for (auto& [u, v] : edge_list) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw BadParams("edge endpoint out of range");
    if (u == v) throw BadParams("self-loop");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
    throw BadParams("duplicate edge");
  edges_ = std::move(edge_list);
  adj_.assign(n_, {});
  adj_mask_.assign(n_, 0);
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    adj_mask_[u] |= bit_of(v);
    adj_mask_[v] |= bit_of(u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool is_simple_path(const Graph& g, std::span<const NodeId> p) {
  if (p.empty()) return false;
  Mask seen = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    NodeId x = p[i];
    if (x < 0 || x >= g.n()) return false;
    if (mask_has(seen, x)) return false;
    seen |= bit_of(x);
    if (i > 0 && !g.adjacent(p[i - 1], x)) return false;
  }
  return true;
}

int min_degree(const Graph& g) {
  int d = std::numeric_limits<int>::max();
  for (NodeId v = 0; v < g.n(); ++v) d = std::min(d, g.degree(v));
  return d;
}

namespace {

// Unit-capacity max-flow network with deterministic BFS augmentation
// (arcs explored in insertion order).
class FlowNet {
 public:
  explicit FlowNet(int nodes) : head_(nodes, -1) {}

  void add_arc(int a, int b, int cap) {
    arcs_.push_back({b, head_[a], cap});
    head_[a] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({a, head_[b], 0});
    head_[b] = static_cast<int>(arcs_.size()) - 1;
  }

  int max_flow(int s, int t, int limit) {
    int flow = 0;
    while (flow < limit && augment(s, t)) ++flow;
    return flow;
  }

  // Arcs with positive residual reversal (i.e. carrying flow) out of `a`,
  // in insertion order.
  std::vector<std::pair<int, int>> flow_arcs_from(int a) const {
    std::vector<std::pair<int, int>> out;  // (arc index, to)
    for (int e = head_[a]; e != -1; e = arcs_[e].next)
      if ((e & 1) == 0 && arcs_[e].cap == 0 && original_cap_was_positive(e))
        out.push_back({e, arcs_[e].to});
    std::reverse(out.begin(), out.end());  // head_ chains store newest first
    return out;
  }

  void consume(int arc) { arcs_[arc].cap = 1; }  // remove one flow unit

 private:
  struct Arc {
    int to;
    int next;
    int cap;
  };

  bool original_cap_was_positive(int e) const {
    // Forward arcs are at even indices and were created with cap >= 1;
    // cap == 0 now means the unit was used.
    return (e & 1) == 0;
  }

  bool augment(int s, int t) {
    std::vector<int> pred_arc(head_.size(), -2);
    pred_arc[s] = -1;
    std::deque<int> q{s};
    while (!q.empty() && pred_arc[t] == -2) {
      int a = q.front();
      q.pop_front();
      // Collect arcs in insertion order for deterministic search.
      std::vector<int> es;
      for (int e = head_[a]; e != -1; e = arcs_[e].next) es.push_back(e);
      for (auto it = es.rbegin(); it != es.rend(); ++it) {
        const Arc& arc = arcs_[*it];
        if (arc.cap > 0 && pred_arc[arc.to] == -2) {
          pred_arc[arc.to] = *it;
          q.push_back(arc.to);
        }
      }
    }
    if (pred_arc[t] == -2) return false;
    for (int v = t; v != s;) {
      int e = pred_arc[v];
      arcs_[e].cap -= 1;
      arcs_[e ^ 1].cap += 1;
      v = arcs_[e ^ 1].to;
    }
    return true;
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
};

// Node-split ids: in(x) = 2x, out(x) = 2x+1.
int split_in(NodeId x) { return 2 * x; }
int split_out(NodeId x) { return 2 * x + 1; }

// Max-flow count of internally-disjoint u->v paths, u,v non-adjacent.
int local_connectivity(const Graph& g, NodeId u, NodeId v) {
  FlowNet net(2 * g.n());
  for (NodeId x = 0; x < g.n(); ++x)
    net.add_arc(split_in(x), split_out(x), (x == u || x == v) ? g.n() : 1);
  for (auto [a, b] : g.edges()) {
    net.add_arc(split_out(a), split_in(b), 1);
    net.add_arc(split_out(b), split_in(a), 1);
  }
  return net.max_flow(split_out(u), split_in(v), g.n());
}

}  // namespace

int count_disjoint_uv_paths(const Graph& g, NodeId u, NodeId v) {
  if (u == v || g.adjacent(u, v))
    throw BadParams("count_disjoint_uv_paths expects a non-adjacent pair");
  return local_connectivity(g, u, v);
}

int vertex_connectivity(const Graph& g) {
  if (g.is_complete()) return g.n() - 1;
  int best = g.n();
  for (NodeId u = 0; u < g.n(); ++u)
    for (NodeId v = u + 1; v < g.n(); ++v)
      if (!g.adjacent(u, v)) best = std::min(best, local_connectivity(g, u, v));
  return best;
}

bool check_theorem_condition(const Graph& g, int f) {
  if (f < 0) throw BadParams("f must be non-negative");
  const int required = 3 * f / 2 + 1;
  return vertex_connectivity(g) >= required && min_degree(g) >= 2 * f &&
         g.n() > required;
}

Path path_excluding(const Graph& g, NodeId u, NodeId v,
                    std::span<const NodeId> excluded) {
  if (u < 0 || u >= g.n() || v < 0 || v >= g.n())
    throw BadParams("path endpoint out of range");
  if (u == v) return Path({u});
  Mask blocked = 0;
  for (NodeId x : excluded) blocked |= bit_of(x);
  // Endpoints are always usable; only internal nodes must avoid `excluded`.
  blocked &= ~(bit_of(u) | bit_of(v));

  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(g.n(), kUnreached);
  dist[v] = 0;
  std::deque<NodeId> q{v};
  while (!q.empty()) {
    NodeId a = q.front();
    q.pop_front();
    for (NodeId b : g.neighbors(a)) {
      if (mask_has(blocked, b) || dist[b] != kUnreached) continue;
      dist[b] = dist[a] + 1;
      q.push_back(b);
    }
  }
  if (dist[u] == kUnreached)
    throw NoPathError("no path from " + std::to_string(u) + " to " +
                      std::to_string(v) + " avoiding the excluded set");

  // Greedy lowest-id descent along shortest-path distances gives the
  // lexicographically smallest shortest sequence.
  std::vector<NodeId> seq{u};
  NodeId cur = u;
  while (cur != v) {
    for (NodeId b : g.neighbors(cur)) {
      if (!mask_has(blocked, b) && dist[b] == dist[cur] - 1) {
        seq.push_back(b);
        cur = b;
        break;
      }
    }
  }
  return Path(std::move(seq));
}

std::vector<Path> disjoint_paths_excluding(const Graph& g,
                                           std::span<const NodeId> sources,
                                           NodeId v,
                                           std::span<const NodeId> forbidden,
                                           int k) {
  Mask src_mask = 0, forb_mask = 0;
  for (NodeId s : sources) src_mask |= bit_of(s);
  for (NodeId x : forbidden) forb_mask |= bit_of(x);
  if (mask_has(src_mask, v)) throw BadParams("v must not be a source");
  if (mask_has(forb_mask, v)) throw BadParams("v must not be forbidden");
  if (src_mask & forb_mask) throw BadParams("sources and forbidden overlap");
  if (mask_count(src_mask) < k)
    throw BadParams("need at least k sources");

  const int super = 2 * g.n();
  FlowNet net(2 * g.n() + 1);
  std::vector<NodeId> srcs(sources.begin(), sources.end());
  std::sort(srcs.begin(), srcs.end());
  for (NodeId x = 0; x < g.n(); ++x) {
    if (mask_has(forb_mask, x)) continue;
    net.add_arc(split_in(x), split_out(x), x == v ? g.n() : 1);
  }
  for (NodeId s : srcs) net.add_arc(super, split_in(s), 1);
  for (auto [a, b] : g.edges()) {
    if (mask_has(forb_mask, a) || mask_has(forb_mask, b)) continue;
    net.add_arc(split_out(a), split_in(b), 1);
    net.add_arc(split_out(b), split_in(a), 1);
  }
  int flow = net.max_flow(super, split_in(v), k);
  if (flow < k) throw InsufficientPathsError(flow, k);

  // Decompose into unit paths, then truncate each at its last source so no
  // source appears as an internal node.
  std::vector<Path> result;
  for (int i = 0; i < k; ++i) {
    std::vector<NodeId> seq;
    int at = super;
    while (at != split_in(v)) {
      auto arcs = net.flow_arcs_from(at);
      if (arcs.empty()) throw std::logic_error("flow decomposition stuck");
      auto [e, to] = arcs.front();
      net.consume(e);
      if (to % 2 == 0 && to != split_in(v)) {
        // entering in(x): consume through the split arc as well
        auto sp = net.flow_arcs_from(to);
        if (sp.empty()) throw std::logic_error("flow decomposition stuck");
        net.consume(sp.front().first);
        seq.push_back(to / 2);
        at = split_out(to / 2);
      } else {
        at = to;
      }
    }
    seq.push_back(v);
    size_t start = 0;
    for (size_t j = 0; j < seq.size(); ++j)
      if (mask_has(src_mask, seq[j])) start = j;
    result.emplace_back(
        std::vector<NodeId>(seq.begin() + static_cast<long>(start), seq.end()));
  }
  std::sort(result.begin(), result.end(),
            [](const Path& a, const Path& b) { return a.source() < b.source(); });
  return result;
}

std::vector<CandidateSet> enumerate_candidate_sets(int n, int f) {
  if (f < 0 || f >= n) throw BadParams("need 0 <= f < n");
  std::vector<CandidateSet> out;
  out.push_back({{}, 0, 0});
  for (int size = 1; size <= f; ++size) {
    std::vector<NodeId> combo(size);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      CandidateSet cs;
      cs.members = combo;
      for (NodeId x : combo) cs.mask |= bit_of(x);
      cs.label = static_cast<Label>(out.size());
      out.push_back(std::move(cs));
      int i = size - 1;
      while (i >= 0 && combo[i] == n - size + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return out;
}

Graph make_complete(int n) {
  if (n < 2) throw BadParams("complete graph needs n >= 2");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph make_cycle(int n) {
  if (n < 3) throw BadParams("cycle needs n >= 3");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n});
  return Graph(n, std::move(edges));
}

Graph make_circulant(int n, std::vector<int> offsets) {
  if (n < 2) throw BadParams("circulant needs n >= 2");
  if (offsets.empty()) throw BadParams("circulant needs at least one offset");
  std::set<std::pair<NodeId, NodeId>> edges;
  for (int s : offsets) {
    int r = ((s % n) + n) % n;
    if (r == 0) throw BadParams("circulant offset divisible by n");
    for (NodeId u = 0; u < n; ++u) {
      NodeId v = (u + r) % n;
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  }
  return Graph(n, {edges.begin(), edges.end()});
}

Graph make_harary(int k, int n) {
  if (k < 2 || k >= n) throw BadParams("harary needs 2 <= k < n");
  const int r = k / 2;
  std::vector<int> offsets;
  for (int s = 1; s <= r; ++s) offsets.push_back(s);
  if (k % 2 == 0) return make_circulant(n, offsets);
  if (n % 2 == 0) {
    offsets.push_back(n / 2);
    return make_circulant(n, offsets);
  }
  // k odd, n odd: circulant core plus the (n+1)/2 near-diametric edges.
  Graph core = make_circulant(n, offsets);
  std::set<std::pair<NodeId, NodeId>> edges(core.edges().begin(),
                                            core.edges().end());
  const int half = (n - 1) / 2;
  for (int i = 0; i <= half; ++i) {
    NodeId a = i, b = i + half;
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  return Graph(n, {edges.begin(), edges.end()});
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("edge list: expected header \"n m\"");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < m; ++i) {
    NodeId u, v;
    if (!(in >> u >> v))
      throw ParseError("edge list: expected " + std::to_string(m) +
                       " edges, got " + std::to_string(i));
    if (!(0 <= u && u < v && v < n))
      throw ParseError("edge list: edge must satisfy 0 <= u < v < n");
    edges.push_back({u, v});
  }
  std::string tail;
  if (in >> tail) throw ParseError("edge list: trailing content");
  try {
    return Graph(n, std::move(edges));
  } catch (const BadParams& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << ' ' << g.m() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

Graph make_graph(const GraphSpec& spec) {
  switch (spec.family) {
    case GraphSpec::Family::complete:
      return make_complete(spec.n);
    case GraphSpec::Family::cycle:
      return make_cycle(spec.n);
    case GraphSpec::Family::harary:
      return make_harary(spec.k, spec.n);
    case GraphSpec::Family::circulant:
      return make_circulant(spec.n, spec.offsets);
    case GraphSpec::Family::edge_list:
      return Graph(spec.n, spec.edges);
  }
  throw BadParams("unknown graph family");
}

}  // namespace byzcast
