#include "byzcast/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace byzcast {

namespace {

void require_keys(const OrderedJson& j,
                  std::initializer_list<const char*> allowed,
                  const char* where) {
  if (!j.is_object()) throw ParseError(std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok)
      throw ParseError(std::string(where) + ": unknown key \"" + item.key() + "\"");
  }
}

const OrderedJson& require(const OrderedJson& j, const char* key,
                           const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(where) + ": missing key \"" + key + "\"");
  return *it;
}

template <typename T>
T get_as(const OrderedJson& j, const char* key, const char* where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string(where) + ": bad value for \"" + key + "\"");
  }
}

std::vector<NodeId> node_list(const OrderedJson& j, const char* key,
                              const char* where) {
  try {
    return require(j, key, where).get<std::vector<NodeId>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string(where) + ": bad node list for \"" + key + "\"");
  }
}

OrderedJson mask_to_json(Mask m, int n) {
  OrderedJson arr = OrderedJson::array();
  for (NodeId v = 0; v < n; ++v)
    if (mask_has(m, v)) arr.push_back(v);
  return arr;
}

Mask mask_from_json(const OrderedJson& j, const char* where) {
  Mask m = 0;
  if (!j.is_array()) throw ParseError(std::string(where) + ": expected a node list");
  for (const auto& e : j) {
    int v = e.get<int>();
    if (v < 0 || v >= kMaxNodes)
      throw ParseError(std::string(where) + ": node out of range");
    m |= bit_of(v);
  }
  return m;
}

std::string inputs_to_string(const std::vector<Bit>& inputs) {
  std::string s;
  for (Bit b : inputs) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<Bit> inputs_from_string(const std::string& s, const char* where) {
  std::vector<Bit> out;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw ParseError(std::string(where) + ": inputs must be a bit string");
    out.push_back(c == '1');
  }
  return out;
}

OrderedJson message_to_json(const Message& m) {
  OrderedJson j;
  j["label"] = m.label;
  j["body"] = static_cast<int>(m.body);
  j["path"] = m.path.nodes;
  return j;
}

Message message_from_json(const OrderedJson& j) {
  require_keys(j, {"label", "body", "path"}, "message");
  Message m;
  m.label = get_as<Label>(j, "label", "message");
  int body = get_as<int>(j, "body", "message");
  if (body != 0 && body != 1) throw ParseError("message: body must be a bit");
  m.body = static_cast<Bit>(body);
  m.path.nodes = node_list(j, "path", "message");
  return m;
}

OrderedJson adversary_to_json(const AdversaryStrategy& a) {
  OrderedJson j;
  j["kind"] = to_string(a.kind);
  if (a.seed) j["seed"] = *a.seed;
  if (a.kind == AdversaryKind::scripted) {
    OrderedJson script = OrderedJson::array();
    for (const ScriptEntry& e : a.script) {
      OrderedJson je;
      je["node"] = e.node;
      je["iteration"] = e.iteration;
      je["round"] = e.round;
      OrderedJson msgs = OrderedJson::array();
      for (const Message& m : e.messages) msgs.push_back(message_to_json(m));
      je["messages"] = std::move(msgs);
      script.push_back(std::move(je));
    }
    j["script"] = std::move(script);
  }
  return j;
}

AdversaryStrategy adversary_from_json(const OrderedJson& j) {
  require_keys(j, {"kind", "seed", "script"}, "adversary");
  AdversaryStrategy a;
  std::string kind = get_as<std::string>(j, "kind", "adversary");
  auto parsed = adversary_kind_from_string(kind);
  if (!parsed) throw ParseError("adversary: unknown kind \"" + kind + "\"");
  a.kind = *parsed;
  if (j.contains("seed")) a.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("script")) {
    if (a.kind != AdversaryKind::scripted)
      throw ParseError("adversary: script only valid for kind scripted");
    for (const auto& je : j["script"]) {
      require_keys(je, {"node", "iteration", "round", "messages"},
                   "script entry");
      ScriptEntry e;
      e.node = get_as<NodeId>(je, "node", "script entry");
      e.iteration = get_as<Label>(je, "iteration", "script entry");
      e.round = get_as<int>(je, "round", "script entry");
      for (const auto& jm : require(je, "messages", "script entry"))
        e.messages.push_back(message_from_json(jm));
      a.script.push_back(std::move(e));
    }
  } else if (a.kind == AdversaryKind::scripted) {
    throw ParseError("adversary: kind scripted requires a script");
  }
  return a;
}

}  // namespace

OrderedJson graph_spec_to_json(const GraphSpec& spec) {
  OrderedJson j;
  switch (spec.family) {
    case GraphSpec::Family::complete:
      j["family"] = "complete";
      j["n"] = spec.n;
      break;
    case GraphSpec::Family::cycle:
      j["family"] = "cycle";
      j["n"] = spec.n;
      break;
    case GraphSpec::Family::harary:
      j["family"] = "harary";
      j["k"] = spec.k;
      j["n"] = spec.n;
      break;
    case GraphSpec::Family::circulant:
      j["family"] = "circulant";
      j["n"] = spec.n;
      j["offsets"] = spec.offsets;
      break;
    case GraphSpec::Family::edge_list: {
      j["n"] = spec.n;
      OrderedJson edges = OrderedJson::array();
      for (auto [u, v] : spec.edges) edges.push_back(OrderedJson::array({u, v}));
      j["edges"] = std::move(edges);
      break;
    }
  }
  return j;
}

GraphSpec graph_spec_from_json(const OrderedJson& j) {
  GraphSpec spec;
  if (j.contains("family")) {
    std::string fam = get_as<std::string>(j, "family", "graph");
    if (fam == "complete" || fam == "cycle") {
      require_keys(j, {"family", "n"}, "graph");
      spec.family = fam == "complete" ? GraphSpec::Family::complete
                                      : GraphSpec::Family::cycle;
      spec.n = get_as<int>(j, "n", "graph");
    } else if (fam == "harary") {
      require_keys(j, {"family", "k", "n"}, "graph");
      spec.family = GraphSpec::Family::harary;
      spec.k = get_as<int>(j, "k", "graph");
      spec.n = get_as<int>(j, "n", "graph");
    } else if (fam == "circulant") {
      require_keys(j, {"family", "n", "offsets"}, "graph");
      spec.family = GraphSpec::Family::circulant;
      spec.n = get_as<int>(j, "n", "graph");
      spec.offsets = get_as<std::vector<int>>(j, "offsets", "graph");
    } else {
      throw ParseError("graph: unknown family \"" + fam + "\"");
    }
  } else {
    require_keys(j, {"n", "edges"}, "graph");
    spec.family = GraphSpec::Family::edge_list;
    spec.n = get_as<int>(j, "n", "graph");
    for (const auto& je : require(j, "edges", "graph")) {
      if (!je.is_array() || je.size() != 2)
        throw ParseError("graph: each edge must be a pair");
      spec.edges.push_back({je[0].get<NodeId>(), je[1].get<NodeId>()});
    }
  }
  return spec;
}

OrderedJson scenario_to_json(const Scenario& s) {
  OrderedJson j;
  j["schema"] = kScenarioSchema;
  j["graph"] = graph_spec_to_json(s.graph_spec);
  j["f"] = s.f;
  j["inputs"] = inputs_to_string(s.inputs);
  j["faulty"] = s.faulty;
  j["adversary"] = adversary_to_json(s.adversary);
  j["seed"] = s.seed;
  return j;
}

Scenario scenario_from_json(const OrderedJson& j) {
  require_keys(j, {"schema", "graph", "f", "inputs", "faulty", "adversary", "seed"},
               "scenario");
  if (get_as<std::string>(j, "schema", "scenario") != kScenarioSchema)
    throw ParseError("scenario: unsupported schema");
  Scenario s;
  s.graph_spec = graph_spec_from_json(require(j, "graph", "scenario"));
  s.f = get_as<int>(j, "f", "scenario");
  s.inputs = inputs_from_string(get_as<std::string>(j, "inputs", "scenario"),
                                "scenario");
  s.faulty = node_list(j, "faulty", "scenario");
  s.adversary = adversary_from_json(require(j, "adversary", "scenario"));
  s.seed = get_as<std::uint64_t>(j, "seed", "scenario");
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

namespace {

OrderedJson violations_to_json(const std::vector<Violation>& vs) {
  OrderedJson arr = OrderedJson::array();
  for (const Violation& v : vs) {
    OrderedJson j;
    j["iteration"] = v.iteration;
    j["node"] = v.node;
    j["detail"] = v.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<Violation> violations_from_json(const OrderedJson& j) {
  std::vector<Violation> out;
  for (const auto& jv : j) {
    require_keys(jv, {"iteration", "node", "detail"}, "violation");
    out.push_back({get_as<Label>(jv, "iteration", "violation"),
                   get_as<NodeId>(jv, "node", "violation"),
                   get_as<std::string>(jv, "detail", "violation")});
  }
  return out;
}

OrderedJson verdict_to_json(const Verdict& v) {
  OrderedJson j;
  j["agreement"] = v.agreement;
  j["validity"] = v.validity;
  j["termination"] = v.termination;
  j["lemma_validity_violations"] = violations_to_json(v.lemma_validity_violations);
  j["lemma_agreement_violations"] = violations_to_json(v.lemma_agreement_violations);
  j["observation_violations"] = violations_to_json(v.observation_violations);
  return j;
}

Verdict verdict_from_json(const OrderedJson& j) {
  require_keys(j,
               {"agreement", "validity", "termination",
                "lemma_validity_violations", "lemma_agreement_violations",
                "observation_violations"},
               "verdict");
  Verdict v;
  v.agreement = get_as<bool>(j, "agreement", "verdict");
  v.validity = get_as<bool>(j, "validity", "verdict");
  v.termination = get_as<bool>(j, "termination", "verdict");
  v.lemma_validity_violations =
      violations_from_json(require(j, "lemma_validity_violations", "verdict"));
  v.lemma_agreement_violations =
      violations_from_json(require(j, "lemma_agreement_violations", "verdict"));
  v.observation_violations =
      violations_from_json(require(j, "observation_violations", "verdict"));
  return v;
}

}  // namespace

OrderedJson trace_to_json(const Trace& t) {
  Graph g = make_graph(t.scenario.graph_spec);
  PathIndex idx(g);

  OrderedJson j;
  j["schema"] = kTraceSchema;
  j["scenario"] = scenario_to_json(t.scenario);
  j["hypothesis_ok"] = t.hypothesis_ok;
  OrderedJson iters = OrderedJson::array();
  for (const IterationRecord& iter : t.iterations) {
    OrderedJson ji;
    ji["label"] = iter.label;
    ji["candidate_set"] = iter.candidate.members;
    OrderedJson rounds = OrderedJson::array();
    for (size_t r = 0; r < iter.rounds.size(); ++r) {
      OrderedJson jr;
      jr["round"] = r + 1;
      OrderedJson txs = OrderedJson::array();
      for (const Transmission& tx : iter.rounds[r].transmissions) {
        OrderedJson jt;
        jt["sender"] = tx.sender;
        jt["label"] = tx.label;
        jt["body"] = static_cast<int>(tx.body);
        jt["path"] = tx.claimed_path(idx);
        jt["to"] = tx.delivered_to.empty() ? g.neighbors(tx.sender)
                                           : tx.delivered_to;
        txs.push_back(std::move(jt));
      }
      jr["transmissions"] = std::move(txs);
      rounds.push_back(std::move(jr));
    }
    ji["rounds"] = std::move(rounds);
    OrderedJson nodes = OrderedJson::array();
    for (const NodeIterationRecord& rec : iter.nodes) {
      OrderedJson jn;
      jn["node"] = rec.node;
      jn["gamma_start"] = static_cast<int>(rec.gamma_start);
      jn["gamma_end"] = static_cast<int>(rec.gamma_end);
      jn["case"] = rec.case_no;
      jn["zero_set"] = mask_to_json(rec.zero_set, g.n());
      jn["one_set"] = mask_to_json(rec.one_set, g.n());
      jn["keep_set"] = mask_to_json(rec.keep_set, g.n());
      jn["switch_set"] = mask_to_json(rec.switch_set, g.n());
      nodes.push_back(std::move(jn));
    }
    ji["nodes"] = std::move(nodes);
    iters.push_back(std::move(ji));
  }
  j["iterations"] = std::move(iters);
  OrderedJson decisions = OrderedJson::array();
  for (Bit b : t.decisions) decisions.push_back(static_cast<int>(b));
  j["decisions"] = std::move(decisions);
  j["verdict"] = t.verdict ? verdict_to_json(*t.verdict) : OrderedJson(nullptr);
  return j;
}

Trace trace_from_json(const OrderedJson& j) {
  require_keys(j,
               {"schema", "scenario", "hypothesis_ok", "iterations",
                "decisions", "verdict"},
               "trace");
  if (get_as<std::string>(j, "schema", "trace") != kTraceSchema)
    throw ParseError("trace: unsupported schema");
  Trace t;
  t.scenario = scenario_from_json(require(j, "scenario", "trace"));
  t.hypothesis_ok = get_as<bool>(j, "hypothesis_ok", "trace");

  Graph g = make_graph(t.scenario.graph_spec);
  PathIndex idx(g);

  for (const auto& ji : require(j, "iterations", "trace")) {
    require_keys(ji, {"label", "candidate_set", "rounds", "nodes"}, "iteration");
    IterationRecord iter;
    iter.label = get_as<Label>(ji, "label", "iteration");
    iter.candidate.members = node_list(ji, "candidate_set", "iteration");
    iter.candidate.label = iter.label;
    for (NodeId v : iter.candidate.members) iter.candidate.mask |= bit_of(v);
    for (const auto& jr : require(ji, "rounds", "iteration")) {
      require_keys(jr, {"round", "transmissions"}, "round");
      RoundLog log;
      for (const auto& jt : require(jr, "transmissions", "round")) {
        require_keys(jt, {"sender", "label", "body", "path", "to"},
                     "transmission");
        Transmission tx;
        tx.sender = get_as<NodeId>(jt, "sender", "transmission");
        tx.label = get_as<Label>(jt, "label", "transmission");
        int body = get_as<int>(jt, "body", "transmission");
        if (body != 0 && body != 1)
          throw ParseError("transmission: body must be a bit");
        tx.body = static_cast<Bit>(body);
        std::vector<NodeId> claimed = node_list(jt, "path", "transmission");
        tx.claimed_len = static_cast<int>(claimed.size());
        std::vector<NodeId> q_seq = claimed;
        q_seq.push_back(tx.sender);
        tx.q = idx.resolve(q_seq);
        if (tx.q == kNoPath) tx.raw_claimed = std::move(claimed);
        tx.delivered_to = node_list(jt, "to", "transmission");
        log.transmissions.push_back(std::move(tx));
      }
      iter.rounds.push_back(std::move(log));
    }
    for (const auto& jn : require(ji, "nodes", "iteration")) {
      require_keys(jn,
                   {"node", "gamma_start", "gamma_end", "case", "zero_set",
                    "one_set", "keep_set", "switch_set"},
                   "node record");
      NodeIterationRecord rec;
      rec.node = get_as<NodeId>(jn, "node", "node record");
      rec.gamma_start = static_cast<Bit>(get_as<int>(jn, "gamma_start", "node record"));
      rec.gamma_end = static_cast<Bit>(get_as<int>(jn, "gamma_end", "node record"));
      rec.case_no = get_as<int>(jn, "case", "node record");
      rec.zero_set = mask_from_json(require(jn, "zero_set", "node record"), "node record");
      rec.one_set = mask_from_json(require(jn, "one_set", "node record"), "node record");
      rec.keep_set = mask_from_json(require(jn, "keep_set", "node record"), "node record");
      rec.switch_set = mask_from_json(require(jn, "switch_set", "node record"), "node record");
      iter.nodes.push_back(std::move(rec));
    }
    t.iterations.push_back(std::move(iter));
  }
  for (const auto& jd : require(j, "decisions", "trace")) {
    int b = jd.get<int>();
    if (b != 0 && b != 1) throw ParseError("trace: decisions must be bits");
    t.decisions.push_back(static_cast<Bit>(b));
  }
  const OrderedJson& jv = require(j, "verdict", "trace");
  if (!jv.is_null()) t.verdict = verdict_from_json(jv);
  return t;
}

Trace load_trace_file(const std::string& path) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return trace_from_json(j);
}

OrderedJson verdict_doc_to_json(const VerdictDoc& doc) {
  OrderedJson j;
  j["schema"] = kVerdictSchema;
  j["scenario_hash"] = doc.scenario_hash;
  j["hypothesis_ok"] = doc.hypothesis_ok;
  OrderedJson inner = verdict_to_json(doc.verdict);
  for (auto& item : inner.items()) j[item.key()] = item.value();
  return j;
}

VerdictDoc verdict_doc_from_json(const OrderedJson& j) {
  require_keys(j,
               {"schema", "scenario_hash", "hypothesis_ok", "agreement",
                "validity", "termination", "lemma_validity_violations",
                "lemma_agreement_violations", "observation_violations"},
               "verdict");
  if (get_as<std::string>(j, "schema", "verdict") != kVerdictSchema)
    throw ParseError("verdict: unsupported schema");
  VerdictDoc doc;
  doc.scenario_hash = get_as<std::string>(j, "scenario_hash", "verdict");
  doc.hypothesis_ok = get_as<bool>(j, "hypothesis_ok", "verdict");
  OrderedJson inner = j;
  inner.erase("schema");
  inner.erase("scenario_hash");
  inner.erase("hypothesis_ok");
  doc.verdict = verdict_from_json(inner);
  return doc;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string canonical_scenario_string(const Scenario& s) {
  return scenario_to_json(s).dump();
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = fnv1a64(canonical_scenario_string(s));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GraphSpec parse_graph_source(const std::string& source) {
  if (std::filesystem::exists(source)) {
    Graph g = load_edge_list_file(source);
    GraphSpec spec;
    spec.family = GraphSpec::Family::edge_list;
    spec.n = g.n();
    spec.edges = g.edges();
    return spec;
  }
  std::vector<std::string> parts;
  std::string cur;
  for (char c : source) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);

  auto to_int = [&](const std::string& s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError("graph source: bad integer \"" + s + "\" in \"" +
                       source + "\"");
    }
  };

  GraphSpec spec;
  const std::string& fam = parts[0];
  if ((fam == "complete" || fam == "cycle") && parts.size() == 2) {
    spec.family = fam == "complete" ? GraphSpec::Family::complete
                                    : GraphSpec::Family::cycle;
    spec.n = to_int(parts[1]);
  } else if (fam == "harary" && parts.size() == 3) {
    spec.family = GraphSpec::Family::harary;
    spec.k = to_int(parts[1]);
    spec.n = to_int(parts[2]);
  } else if (fam == "circulant" && parts.size() == 3) {
    spec.family = GraphSpec::Family::circulant;
    spec.n = to_int(parts[1]);
    std::string off;
    for (char c : parts[2] + ",") {
      if (c == ',') {
        if (!off.empty()) spec.offsets.push_back(to_int(off));
        off.clear();
      } else {
        off.push_back(c);
      }
    }
  } else {
    throw ParseError(
        "graph source \"" + source +
        "\" is neither an existing file nor a family spec "
        "(complete:N, cycle:N, harary:K:N, circulant:N:O1,O2,...)");
  }
  return spec;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace byzcast
