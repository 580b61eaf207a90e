// byzcast — Byzantine consensus under local broadcast: check graph
// conditions, run scenarios, sweep matrices, and verify traces.

#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "byzcast/serialize.hpp"
#include "byzcast/sweep.hpp"
#include "byzcast/verifier.hpp"

namespace {

using namespace byzcast;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;       // condition FAIL / guarantee violated
constexpr int kExitUsage = 2;      // parse or IO error
constexpr int kExitAborted = 3;    // run aborted on a hypothesis-violating graph

void print_verdict(std::ostream& out, const Verdict& v) {
  out << "agreement: " << (v.agreement ? "true" : "false")
      << "  validity: " << (v.validity ? "true" : "false")
      << "  termination: " << (v.termination ? "true" : "false") << "\n";
  out << "lemma_validity_violations: " << v.lemma_validity_violations.size()
      << "\n";
  out << "lemma_agreement_violations: " << v.lemma_agreement_violations.size()
      << "\n";
  out << "observation_violations: " << v.observation_violations.size() << "\n";
  for (const auto* list :
       {&v.lemma_validity_violations, &v.lemma_agreement_violations,
        &v.observation_violations}) {
    for (size_t i = 0; i < list->size() && i < 5; ++i) {
      const Violation& viol = (*list)[i];
      out << "  iteration " << viol.iteration << " node " << viol.node << ": "
          << viol.detail << "\n";
    }
  }
}

int cmd_check(const std::string& graph_source, int f) {
  GraphSpec spec = parse_graph_source(graph_source);
  Graph g = make_graph(spec);
  const int degree = min_degree(g);
  const int kappa = vertex_connectivity(g);
  const int required_kappa = 3 * f / 2 + 1;
  const bool pass = check_theorem_condition(g, f);
  std::cout << "n: " << g.n() << "\n";
  std::cout << "m: " << g.m() << "\n";
  std::cout << "min_degree: " << degree << "\n";
  std::cout << "vertex_connectivity: " << kappa << "\n";
  std::cout << "required_connectivity: " << required_kappa << "\n";
  std::cout << "required_min_degree: " << 2 * f << "\n";
  std::cout << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitFail;
}

Scenario scenario_from_flags(const std::string& graph_source, int f,
                             const std::string& inputs,
                             const std::vector<NodeId>& faulty,
                             const std::string& adversary,
                             std::uint64_t seed) {
  Scenario s;
  s.graph_spec = parse_graph_source(graph_source);
  s.f = f;
  for (char c : inputs) {
    if (c != '0' && c != '1')
      throw ParseError("--inputs must be a bit string");
    s.inputs.push_back(c == '1');
  }
  s.faulty = faulty;
  std::sort(s.faulty.begin(), s.faulty.end());
  auto colon = adversary.find(':');
  std::string kind = adversary.substr(0, colon);
  auto parsed = adversary_kind_from_string(kind);
  if (!parsed) throw ParseError("unknown adversary \"" + kind + "\"");
  s.adversary.kind = *parsed;
  if (colon != std::string::npos)
    s.adversary.seed = std::stoull(adversary.substr(colon + 1));
  s.seed = seed;
  return s;
}

int cmd_run(const Scenario& scenario, const std::string& trace_out,
            const std::string& verdict_out, bool allow_large) {
  const std::string hash = scenario_hash(scenario);
  Graph g = make_graph(scenario.graph_spec);
  std::cout << "scenario: " << hash << "\n";
  std::cout << "graph: n=" << g.n() << " m=" << g.m() << " f=" << scenario.f
            << "\n";
  const bool hypothesis_ok = check_theorem_condition(g, scenario.f);
  std::cout << "hypothesis: " << (hypothesis_ok ? "ok" : "VIOLATED") << "\n";
  if (!hypothesis_ok)
    std::cout << "warning: the sufficiency condition fails; results are "
                 "reported but not asserted\n";

  Trace trace;
  RunOptions opts;
  opts.allow_large = allow_large;
  try {
    trace = run(scenario, opts);
  } catch (const NoPathError& e) {
    std::cout << "aborted: " << e.what() << "\n";
    return hypothesis_ok ? kExitFail : kExitAborted;
  } catch (const PathConstructionFailed& e) {
    std::cout << "aborted: " << e.what() << "\n";
    return hypothesis_ok ? kExitFail : kExitAborted;
  }

  Verdict verdict = verify_trace(trace);
  trace.verdict = verdict;
  std::cout << "iterations: " << trace.iterations.size()
            << "  rounds_per_iteration: " << g.n() << "\n";
  std::cout << "decisions:";
  for (NodeId v = 0; v < g.n(); ++v) {
    std::cout << ' ' << static_cast<int>(trace.decisions[v]);
    if (scenario.is_faulty(v)) std::cout << "(faulty)";
  }
  std::cout << "\n";
  print_verdict(std::cout, verdict);

  if (!trace_out.empty())
    write_text_file(trace_out, trace_to_json(trace).dump() + "\n");
  if (!verdict_out.empty()) {
    VerdictDoc doc{hash, hypothesis_ok, verdict};
    write_text_file(verdict_out, verdict_doc_to_json(doc).dump() + "\n");
  }

  const bool ok = verdict.all_ok();
  std::cout << "verdict: " << (ok ? "PASS" : (hypothesis_ok ? "FAIL" : "UNASSERTED"))
            << "\n";
  if (hypothesis_ok && !ok) return kExitFail;
  return kExitOk;
}

int cmd_sweep(const std::string& matrix_file, const std::string& out_dir,
              int workers, bool no_traces, bool allow_large) {
  SweepMatrix matrix = load_matrix_file(matrix_file);
  SweepOptions opts;
  opts.workers = workers;
  opts.out_dir = out_dir;
  opts.write_traces = !no_traces;
  opts.allow_large = allow_large;
  SweepResult result = run_sweep(matrix, opts);
  std::string report = aggregate_report(matrix, result);
  std::cout << report;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file((std::filesystem::path(out_dir) / "aggregate.txt").string(),
                    report);
  }
  if (result.total_failures > 0) {
    std::cerr << "failing scenarios (replay with: byzcast run --scenario <file>):\n";
    for (const CellSummary& cell : result.cells)
      for (const std::string& s : cell.failing_scenarios)
        std::cerr << s << "\n";
    return kExitFail;
  }
  return kExitOk;
}

int cmd_gen(const std::string& family, int n, int k,
            const std::vector<int>& offsets, const std::string& out) {
  GraphSpec spec;
  if (family == "complete") {
    spec.family = GraphSpec::Family::complete;
    spec.n = n;
  } else if (family == "cycle") {
    spec.family = GraphSpec::Family::cycle;
    spec.n = n;
  } else if (family == "harary") {
    spec.family = GraphSpec::Family::harary;
    spec.k = k;
    spec.n = n;
  } else if (family == "circulant") {
    spec.family = GraphSpec::Family::circulant;
    spec.n = n;
    spec.offsets = offsets;
  } else {
    throw ParseError("unknown family \"" + family + "\"");
  }
  std::string text = format_edge_list(make_graph(spec));
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
  return kExitOk;
}

int cmd_verify(const std::string& trace_file, const std::string& out) {
  Trace trace = load_trace_file(trace_file);
  Verdict verdict = verify_trace(trace);
  const std::string hash = scenario_hash(trace.scenario);
  std::cout << "scenario: " << hash << "\n";
  std::cout << "hypothesis: " << (trace.hypothesis_ok ? "ok" : "VIOLATED") << "\n";
  print_verdict(std::cout, verdict);
  if (!out.empty()) {
    VerdictDoc doc{hash, trace.hypothesis_ok, verdict};
    write_text_file(out, verdict_doc_to_json(doc).dump() + "\n");
  }
  const bool ok = verdict.all_ok();
  std::cout << "verdict: " << (ok ? "PASS" : (trace.hypothesis_ok ? "FAIL" : "UNASSERTED"))
            << "\n";
  if (trace.hypothesis_ok && !ok) return kExitFail;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "byzcast: Byzantine consensus simulator for the local broadcast model"};
  app.require_subcommand(1);

  std::string graph_source, inputs, adversary = "conforming";
  std::string scenario_file, trace_out, verdict_out, matrix_file, out_dir,
      trace_file, family, out_file;
  std::vector<NodeId> faulty;
  std::vector<int> offsets;
  int f = 0, n = 0, k = 0;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  bool allow_large = false, no_traces = false;

  CLI::App* check = app.add_subcommand("check", "check the sufficiency condition");
  check->add_option("--graph", graph_source, "edge-list file or family spec")
      ->required();
  check->add_option("--f", f, "fault budget")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and verify it");
  run_cmd->add_option("--scenario", scenario_file, "scenario JSON file");
  run_cmd->add_option("--graph", graph_source, "edge-list file or family spec");
  run_cmd->add_option("--f", f, "fault budget");
  run_cmd->add_option("--inputs", inputs, "bit string, one bit per node");
  run_cmd->add_option("--faulty", faulty, "faulty node ids");
  run_cmd->add_option("--adversary", adversary, "strategy kind, optionally kind:seed");
  run_cmd->add_option("--seed", seed, "scenario seed");
  run_cmd->add_option("--out", trace_out, "write the trace here");
  run_cmd->add_option("--verdict-out", verdict_out, "write the verdict here");
  run_cmd->add_flag("--allow-large", allow_large, "override the n<=10, f<=3 guardrail");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a scenario matrix");
  sweep_cmd->add_option("--matrix", matrix_file, "matrix JSON file")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory for traces/verdicts");
  sweep_cmd->add_option("--workers", workers, "concurrent runs");
  sweep_cmd->add_flag("--no-traces", no_traces, "persist only verdicts");
  sweep_cmd->add_flag("--allow-large", allow_large, "override the guardrail");

  CLI::App* gen = app.add_subcommand("gen", "emit an edge list for a family");
  gen->add_option("--family", family, "complete|cycle|harary|circulant")->required();
  gen->add_option("--n", n, "node count")->required();
  gen->add_option("--k", k, "harary connectivity parameter");
  gen->add_option("--offsets", offsets, "circulant offsets");
  gen->add_option("--out", out_file, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "re-run the verifier on a trace");
  verify->add_option("--trace", trace_file, "trace JSON file")->required();
  verify->add_option("--out", out_file, "write the verdict here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(graph_source, f);
    if (run_cmd->parsed()) {
      Scenario scenario;
      if (!scenario_file.empty()) {
        scenario = load_scenario_file(scenario_file);
      } else {
        if (graph_source.empty() || inputs.empty())
          throw ParseError("run needs --scenario or --graph/--inputs flags");
        scenario = scenario_from_flags(graph_source, f, inputs, faulty,
                                       adversary, seed);
      }
      return cmd_run(scenario, trace_out, verdict_out, allow_large);
    }
    if (sweep_cmd->parsed())
      return cmd_sweep(matrix_file, out_dir, workers, no_traces, allow_large);
    if (gen->parsed()) return cmd_gen(family, n, k, offsets, out_file);
    if (verify->parsed()) return cmd_verify(trace_file, out_file);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BadParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
