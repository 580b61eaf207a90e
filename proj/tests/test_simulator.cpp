#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "byzcast/serialize.hpp"
#include "byzcast/simulator.hpp"
#include "byzcast/verifier.hpp"

using namespace byzcast;

namespace {

GraphSpec family_spec(GraphSpec::Family fam, int n, int k = 0) {
  GraphSpec g;
  g.family = fam;
  g.n = n;
  g.k = k;
  return g;
}

Scenario make_scenario(GraphSpec spec, int f, std::vector<Bit> inputs,
                       std::vector<NodeId> faulty, AdversaryKind kind,
                       std::uint64_t seed = 0) {
  Scenario s;
  s.graph_spec = std::move(spec);
  s.f = f;
  s.inputs = std::move(inputs);
  s.faulty = std::move(faulty);
  s.adversary.kind = kind;
  s.seed = seed;
  return s;
}

const IterationRecord& iteration_for(const Trace& trace,
                                     const std::vector<NodeId>& members) {
  for (const IterationRecord& iter : trace.iterations)
    if (iter.candidate.members == members) return iter;
  REQUIRE(false);
  return trace.iterations.front();
}

}  // namespace

TEST_CASE("fault-free unanimous run: states never move") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 1,
                             {0, 0, 0, 0}, {}, AdversaryKind::conforming);
  Trace trace = run(s);
  REQUIRE(trace.iterations.size() == 5);  // 1 + 4 candidate sets
  for (const IterationRecord& iter : trace.iterations) {
    REQUIRE(iter.nodes.size() == 4);
    for (const NodeIterationRecord& rec : iter.nodes) {
      CHECK(rec.gamma_start == 0);
      CHECK(rec.gamma_end == 0);
      CHECK(rec.zero_set == Mask{0b1111});
      CHECK(rec.one_set == 0);
    }
  }
  CHECK(trace.decisions == std::vector<Bit>{0, 0, 0, 0});
}

TEST_CASE("iteration whose candidate set covers the faulty set reaches unanimity") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 1,
                             {0, 1, 0, 1}, {2}, AdversaryKind::crash_silent);
  Trace trace = run(s);
  const IterationRecord& covering = iteration_for(trace, {2});
  REQUIRE(covering.nodes.size() == 3);
  Bit first = covering.nodes[0].gamma_end;
  for (const NodeIterationRecord& rec : covering.nodes)
    CHECK(rec.gamma_end == first);
}

TEST_CASE("per-iteration validity holds for every candidate set and adversary") {
  for (AdversaryKind kind :
       {AdversaryKind::flip_body, AdversaryKind::equivocate_attempt,
        AdversaryKind::path_forger, AdversaryKind::random_seeded}) {
    Scenario s = make_scenario(family_spec(GraphSpec::Family::complete, 5), 2,
                               {0, 1, 1, 0, 1}, {1, 3}, kind, 11);
    Trace trace = run(s);
    for (const IterationRecord& iter : trace.iterations) {
      bool has_zero = false, has_one = false;
      for (const NodeIterationRecord& rec : iter.nodes)
        (rec.gamma_start ? has_one : has_zero) = true;
      for (const NodeIterationRecord& rec : iter.nodes) {
        CAPTURE(to_string(kind));
        CHECK((rec.gamma_end ? has_one : has_zero));
      }
    }
  }
}

TEST_CASE("unanimous non-faulty inputs force that decision under attack") {
  // Two colluding flip_body nodes cannot shake three zeros on K5.
  Scenario s = make_scenario(family_spec(GraphSpec::Family::complete, 5), 2,
                             {0, 0, 0, 1, 1}, {3, 4}, AdversaryKind::flip_body);
  Trace trace = run(s);
  for (NodeId v : {0, 1, 2}) CHECK(trace.decisions[v] == 0);
}

TEST_CASE("fault-free mixed inputs still agree") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 1,
                             {0, 1, 0, 1}, {}, AdversaryKind::conforming);
  Trace trace = run(s);
  for (NodeId v = 1; v < 4; ++v) CHECK(trace.decisions[v] == trace.decisions[0]);
}

TEST_CASE("round and iteration counts match the closed forms") {
  CHECK(expected_iteration_count(5, 2) == 16);
  CHECK(expected_iteration_count(4, 1) == 5);
  CHECK(expected_iteration_count(8, 2) == 37);

  Scenario s = make_scenario(family_spec(GraphSpec::Family::complete, 5), 2,
                             {1, 0, 1, 0, 1}, {0}, AdversaryKind::flip_body);
  Trace trace = run(s);
  REQUIRE(trace.iterations.size() == 16);
  int rounds = 0;
  for (const IterationRecord& iter : trace.iterations) {
    CHECK(iter.rounds.size() == 5);
    rounds += static_cast<int>(iter.rounds.size());
  }
  CHECK(rounds == 80);
}

TEST_CASE("the final flood round never carries conforming traffic") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::complete, 5), 2,
                             {1, 0, 1, 0, 1}, {}, AdversaryKind::conforming);
  Trace trace = run(s);
  for (const IterationRecord& iter : trace.iterations)
    CHECK(iter.rounds.back().transmissions.empty());
}

TEST_CASE("runs are deterministic down to the serialized bytes") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::harary, 8, 4), 2,
                             {0, 1, 1, 0, 1, 0, 0, 1}, {2, 6},
                             AdversaryKind::random_seeded, 9);
  Trace a = run(s);
  Trace b = run(s);
  CHECK(trace_to_json(a).dump() == trace_to_json(b).dump());

  // A shared context changes nothing.
  SimContext ctx(make_graph(s.graph_spec), s.f);
  Trace c = run(s, {}, &ctx);
  CHECK(trace_to_json(a).dump() == trace_to_json(c).dump());
}

TEST_CASE("scenario validation rejects structural problems") {
  Graph c4 = make_cycle(4);
  Scenario s = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 1,
                             {0, 1, 0}, {}, AdversaryKind::conforming);
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // inputs too short

  s.inputs = {0, 1, 0, 1};
  s.faulty = {1, 3};
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // more than f faulty

  s.faulty = {3, 1};
  s.f = 2;
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // unsorted

  s.faulty = {1, 1};
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // duplicate

  s.faulty = {1};
  s.adversary.kind = AdversaryKind::scripted;
  s.adversary.script = {{2, -1, 1, {}}};
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // script for honest node

  s.adversary.script = {{1, -1, 0, {}}};
  CHECK_THROWS_AS(s.validate(c4), ScenarioError);  // round < 1

  Scenario big_f = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 4,
                                 {0, 1, 0, 1}, {}, AdversaryKind::conforming);
  CHECK_THROWS_AS(big_f.validate(c4), ScenarioError);  // f >= n
}

TEST_CASE("the desk-scale guardrail refuses big scenarios unless overridden") {
  Scenario wide = make_scenario(family_spec(GraphSpec::Family::cycle, 11), 1,
                                std::vector<Bit>(11, 0), {},
                                AdversaryKind::conforming);
  CHECK_THROWS_AS(run(wide), ScenarioError);
  RunOptions opts;
  opts.allow_large = true;
  Trace trace = run(wide, opts);
  CHECK(trace.decisions == std::vector<Bit>(11, 0));

  Scenario deep = make_scenario(family_spec(GraphSpec::Family::complete, 5), 4,
                                std::vector<Bit>(5, 1), {},
                                AdversaryKind::conforming);
  CHECK_THROWS_AS(run(deep), ScenarioError);
}

TEST_CASE("hypothesis-violating graphs are flagged; impossible ones abort") {
  // K4 with f=2 fails the condition but this run can still complete.
  Scenario flagged = make_scenario(family_spec(GraphSpec::Family::complete, 4),
                                   2, {0, 0, 0, 0}, {},
                                   AdversaryKind::conforming);
  Trace trace = run(flagged);
  CHECK_FALSE(trace.hypothesis_ok);
  CHECK(trace.decisions == std::vector<Bit>{0, 0, 0, 0});

  // C5 with f=2 cannot even pick candidate-excluding paths.
  Scenario impossible = make_scenario(family_spec(GraphSpec::Family::cycle, 5),
                                      2, {0, 0, 0, 0, 0}, {},
                                      AdversaryKind::conforming);
  CHECK_THROWS_AS(run(impossible), NoPathError);
}

TEST_CASE("scripted adversaries replay their message lists verbatim") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::cycle, 4), 1,
                             {0, 0, 0, 0}, {2}, AdversaryKind::scripted);
  // Iteration 0 only: originate 1, then claim a path that does not exist.
  s.adversary.script = {
      {2, 0, 1, {Message{-1, 1, Path{}}}},
      {2, 0, 2, {Message{-1, 1, Path{{0}}},      // (0,2) is no edge of C4
                 Message{-1, 1, Path{{1}}}}},    // genuine-looking forward
  };
  Trace trace = run(s);
  const auto& r1 = trace.iterations[0].rounds[0].transmissions;
  bool originated = false;
  for (const Transmission& t : r1)
    if (t.sender == 2 && t.body == 1 && t.claimed_len == 0) originated = true;
  CHECK(originated);
  const auto& r2 = trace.iterations[0].rounds[1].transmissions;
  int from_two = 0, malformed = 0;
  for (const Transmission& t : r2) {
    if (t.sender != 2) continue;
    ++from_two;
    if (t.q == kNoPath) ++malformed;
  }
  CHECK(from_two == 2);
  CHECK(malformed == 1);
  // Silent in every later iteration: neighbors fall back to substitution,
  // and the run still decides.
  CHECK(trace.decisions.size() == 4);
}

TEST_CASE("run_iteration records the partition of every non-faulty node") {
  Scenario s = make_scenario(family_spec(GraphSpec::Family::complete, 5), 2,
                             {0, 1, 0, 1, 1}, {4}, AdversaryKind::path_forger, 3);
  SimContext ctx(make_graph(s.graph_spec), s.f);
  std::vector<NodeState> states(5);
  for (NodeId v = 0; v < 5; ++v) {
    states[v].id = v;
    states[v].input = s.inputs[v];
    states[v].gamma = s.inputs[v];
    states[v].is_faulty = s.is_faulty(v);
  }
  const Mask all = 0b11111;
  for (const CandidateSet& F : ctx.candidates()) {
    IterationRecord rec = run_iteration(ctx, F, states, s);
    CHECK(rec.label == F.label);
    CHECK(rec.rounds.size() == 5);
    REQUIRE(rec.nodes.size() == 4);
    for (const NodeIterationRecord& nr : rec.nodes) {
      CHECK((nr.zero_set | nr.one_set) == all);
      CHECK((nr.zero_set & nr.one_set) == 0);
      CHECK((nr.keep_set | nr.switch_set) == all);
      CHECK((nr.keep_set & nr.switch_set) == 0);
    }
  }
}
