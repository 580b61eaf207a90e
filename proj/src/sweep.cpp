#include "byzcast/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "byzcast/verifier.hpp"

namespace byzcast {

namespace {

void require_cell_keys(const OrderedJson& j) {
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "graph" && k != "f" && k != "faulty_sets" && k != "adversaries" &&
        k != "inputs" && k != "seed")
      throw ParseError("matrix cell: unknown key \"" + k + "\"");
  }
}

OrderedJson inputs_spec_to_json(const InputsSpec& spec) {
  switch (spec.mode) {
    case InputsSpec::Mode::exhaustive:
      return "exhaustive";
    case InputsSpec::Mode::samples: {
      OrderedJson j;
      j["samples"] = spec.samples;
      return j;
    }
    case InputsSpec::Mode::list:
      return spec.list;
  }
  return {};
}

InputsSpec inputs_spec_from_json(const OrderedJson& j) {
  InputsSpec spec;
  if (j.is_string()) {
    if (j.get<std::string>() != "exhaustive")
      throw ParseError("matrix cell: inputs string must be \"exhaustive\"");
    spec.mode = InputsSpec::Mode::exhaustive;
  } else if (j.is_object()) {
    for (const auto& item : j.items())
      if (item.key() != "samples")
        throw ParseError("matrix cell: unknown inputs key \"" + item.key() + "\"");
    spec.mode = InputsSpec::Mode::samples;
    spec.samples = j.at("samples").get<int>();
    if (spec.samples < 1) throw ParseError("matrix cell: samples must be >= 1");
  } else if (j.is_array()) {
    spec.mode = InputsSpec::Mode::list;
    for (const auto& je : j) spec.list.push_back(je.get<std::string>());
  } else {
    throw ParseError("matrix cell: bad inputs");
  }
  return spec;
}

}  // namespace

OrderedJson matrix_to_json(const SweepMatrix& m) {
  OrderedJson j;
  j["schema"] = kMatrixSchema;
  OrderedJson cells = OrderedJson::array();
  for (const MatrixCell& c : m.cells) {
    OrderedJson jc;
    jc["graph"] = graph_spec_to_json(c.graph);
    jc["f"] = c.f;
    if (c.faulty_sets) {
      OrderedJson sets = OrderedJson::array();
      for (const auto& s : *c.faulty_sets) sets.push_back(s);
      jc["faulty_sets"] = std::move(sets);
    } else {
      jc["faulty_sets"] = "all";
    }
    OrderedJson advs = OrderedJson::array();
    for (const AdversaryStrategy& a : c.adversaries) {
      OrderedJson ja;
      ja["kind"] = to_string(a.kind);
      if (a.seed) ja["seed"] = *a.seed;
      advs.push_back(std::move(ja));
    }
    jc["adversaries"] = std::move(advs);
    jc["inputs"] = c.inputs ? inputs_spec_to_json(*c.inputs) : OrderedJson("default");
    jc["seed"] = c.seed;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j;
}

SweepMatrix matrix_from_json(const OrderedJson& j) {
  for (const auto& item : j.items())
    if (item.key() != "schema" && item.key() != "cells")
      throw ParseError("matrix: unknown key \"" + item.key() + "\"");
  if (!j.contains("schema") || j["schema"].get<std::string>() != kMatrixSchema)
    throw ParseError("matrix: unsupported schema");
  SweepMatrix m;
  if (!j.contains("cells")) throw ParseError("matrix: missing cells");
  for (const auto& jc : j["cells"]) {
    require_cell_keys(jc);
    MatrixCell c;
    if (!jc.contains("graph")) throw ParseError("matrix cell: missing graph");
    c.graph = graph_spec_from_json(jc["graph"]);
    if (!jc.contains("f")) throw ParseError("matrix cell: missing f");
    c.f = jc["f"].get<int>();
    if (jc.contains("faulty_sets") && !jc["faulty_sets"].is_string()) {
      c.faulty_sets.emplace();
      for (const auto& js : jc["faulty_sets"])
        c.faulty_sets->push_back(js.get<std::vector<NodeId>>());
    } else if (jc.contains("faulty_sets") &&
               jc["faulty_sets"].get<std::string>() != "all") {
      throw ParseError("matrix cell: faulty_sets must be \"all\" or a list");
    }
    if (jc.contains("adversaries")) {
      for (const auto& ja : jc["adversaries"]) {
        for (const auto& item : ja.items())
          if (item.key() != "kind" && item.key() != "seed")
            throw ParseError("matrix cell: unknown adversary key \"" +
                             item.key() + "\"");
        AdversaryStrategy a;
        auto kind = adversary_kind_from_string(ja.at("kind").get<std::string>());
        if (!kind) throw ParseError("matrix cell: unknown adversary kind");
        a.kind = *kind;
        if (ja.contains("seed")) a.seed = ja["seed"].get<std::uint64_t>();
        c.adversaries.push_back(std::move(a));
      }
    }
    if (jc.contains("inputs") &&
        !(jc["inputs"].is_string() && jc["inputs"].get<std::string>() == "default"))
      c.inputs = inputs_spec_from_json(jc["inputs"]);
    if (jc.contains("seed")) c.seed = jc["seed"].get<std::uint64_t>();
    m.cells.push_back(std::move(c));
  }
  return m;
}

SweepMatrix load_matrix_file(const std::string& path) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return matrix_from_json(j);
}

std::vector<AdversaryStrategy> default_adversaries() {
  std::vector<AdversaryStrategy> out;
  out.push_back({AdversaryKind::conforming, {}, {}});
  out.push_back({AdversaryKind::crash_silent, {}, {}});
  out.push_back({AdversaryKind::flip_body, {}, {}});
  out.push_back({AdversaryKind::equivocate_attempt, {}, {}});
  out.push_back({AdversaryKind::path_forger, {}, {}});
  for (std::uint64_t seed : {1, 2, 3})
    out.push_back({AdversaryKind::random_seeded, seed, {}});
  return out;
}

std::vector<std::vector<Bit>> expand_inputs(const InputsSpec& spec, int n,
                                            std::uint64_t seed) {
  std::vector<std::vector<Bit>> out;
  auto from_word = [n](std::uint64_t w) {
    std::vector<Bit> bits(n);
    for (int v = 0; v < n; ++v) bits[v] = (w >> v) & 1;
    return bits;
  };
  switch (spec.mode) {
    case InputsSpec::Mode::exhaustive:
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w)
        out.push_back(from_word(w));
      break;
    case InputsSpec::Mode::samples: {
      const std::uint64_t space = std::uint64_t{1} << n;
      std::set<std::uint64_t> chosen{0, space - 1};  // force unanimity cases
      std::uint64_t i = 0;
      while (chosen.size() < std::min<std::uint64_t>(spec.samples, space))
        chosen.insert(adversary_draw(seed, 0, 0, i++) % space);
      for (std::uint64_t w : chosen) out.push_back(from_word(w));
      break;
    }
    case InputsSpec::Mode::list:
      for (const std::string& s : spec.list) {
        std::vector<Bit> bits;
        for (char ch : s) {
          if (ch != '0' && ch != '1')
            throw ParseError("inputs list entries must be bit strings");
          bits.push_back(ch == '1');
        }
        out.push_back(std::move(bits));
      }
      break;
  }
  return out;
}

std::vector<Scenario> expand_cell(const MatrixCell& cell) {
  Graph g = make_graph(cell.graph);
  const int n = g.n();

  std::vector<std::vector<NodeId>> faulty_sets;
  if (cell.faulty_sets) {
    faulty_sets = *cell.faulty_sets;
  } else {
    for (const CandidateSet& cs : enumerate_candidate_sets(n, cell.f))
      faulty_sets.push_back(cs.members);
  }

  std::vector<AdversaryStrategy> adversaries =
      cell.adversaries.empty() ? default_adversaries() : cell.adversaries;

  InputsSpec inputs_spec;
  if (cell.inputs) {
    inputs_spec = *cell.inputs;
  } else {
    inputs_spec.mode =
        n <= 6 ? InputsSpec::Mode::exhaustive : InputsSpec::Mode::samples;
    inputs_spec.samples = 64;
  }
  std::vector<std::vector<Bit>> inputs = expand_inputs(inputs_spec, n, cell.seed);

  std::vector<Scenario> out;
  for (const auto& faulty : faulty_sets) {
    for (const AdversaryStrategy& adv : adversaries) {
      for (const auto& in : inputs) {
        Scenario s;
        s.graph_spec = cell.graph;
        s.f = cell.f;
        s.inputs = in;
        s.faulty = faulty;
        std::sort(s.faulty.begin(), s.faulty.end());
        s.adversary = adv;
        s.seed = cell.seed;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

SweepResult run_sweep(const SweepMatrix& matrix, const SweepOptions& options) {
  namespace fs = std::filesystem;

  struct Job {
    int cell;
    Scenario scenario;
  };
  std::vector<Job> jobs;
  for (size_t c = 0; c < matrix.cells.size(); ++c)
    for (Scenario& s : expand_cell(matrix.cells[c]))
      jobs.push_back({static_cast<int>(c), std::move(s)});

  // One immutable context per distinct (graph, f), shared by all workers.
  std::map<std::string, std::unique_ptr<SimContext>> contexts;
  std::map<std::string, std::string> context_failures;
  for (const Job& job : jobs) {
    std::string key = graph_spec_to_json(job.scenario.graph_spec).dump() + "#" +
                      std::to_string(job.scenario.f);
    if (contexts.count(key) || context_failures.count(key)) continue;
    try {
      contexts[key] = std::make_unique<SimContext>(
          make_graph(job.scenario.graph_spec), job.scenario.f);
    } catch (const NoPathError& e) {
      context_failures[key] = e.what();  // hypothesis-violating graph
    }
  }

  if (!options.out_dir.empty()) {
    fs::create_directories(fs::path(options.out_dir) / "verdicts");
    if (options.write_traces)
      fs::create_directories(fs::path(options.out_dir) / "traces");
  }

  std::vector<RunOutcome> outcomes(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      const Job& job = jobs[i];
      RunOutcome& out = outcomes[i];
      out.cell = job.cell;
      out.hash = scenario_hash(job.scenario);
      std::string key =
          graph_spec_to_json(job.scenario.graph_spec).dump() + "#" +
          std::to_string(job.scenario.f);
      Graph g = make_graph(job.scenario.graph_spec);
      out.hypothesis_ok = check_theorem_condition(g, job.scenario.f);
      auto ctx_it = contexts.find(key);
      if (ctx_it == contexts.end()) {
        out.aborted = true;
        out.abort_reason = context_failures.at(key);
        continue;
      }
      const SimContext& ctx = *ctx_it->second;
      try {
        RunOptions ropts;
        ropts.allow_large = options.allow_large;
        Trace trace = run(job.scenario, ropts, &ctx);
        out.verdict = verify_trace(trace, ctx);
        trace.verdict = out.verdict;
        out.pass = out.hypothesis_ok && out.verdict.all_ok();
        if (!options.out_dir.empty()) {
          VerdictDoc doc{out.hash, out.hypothesis_ok, out.verdict};
          write_text_file(
              (fs::path(options.out_dir) / "verdicts" / (out.hash + ".verdict.json")).string(),
              verdict_doc_to_json(doc).dump() + "\n");
          if (options.write_traces)
            write_text_file(
                (fs::path(options.out_dir) / "traces" / (out.hash + ".trace.json")).string(),
                trace_to_json(trace).dump() + "\n");
        }
      } catch (const NoPathError& e) {
        out.aborted = true;
        out.abort_reason = e.what();
      } catch (const PathConstructionFailed& e) {
        out.aborted = true;
        out.abort_reason = e.what();
      }
    }
  };

  const int workers = std::max(1, options.workers);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SweepResult result;
  result.cells.assign(matrix.cells.size(), {});
  for (size_t i = 0; i < jobs.size(); ++i) {
    const RunOutcome& out = outcomes[i];
    CellSummary& cell = result.cells[out.cell];
    ++cell.runs;
    ++result.total_runs;
    if (!out.hypothesis_ok) {
      ++cell.flagged;
      ++result.total_flagged;
    } else if (out.pass) {
      ++cell.passes;
      ++result.total_passes;
    } else {
      ++cell.failures;
      ++result.total_failures;
      cell.failing_scenarios.push_back(canonical_scenario_string(jobs[i].scenario));
    }
  }
  return result;
}

std::string aggregate_report(const SweepMatrix& matrix,
                             const SweepResult& result) {
  std::ostringstream out;
  out << "byzcast-sweep-aggregate/1\n";
  out << "cells: " << matrix.cells.size() << "\n";
  out << "total_runs: " << result.total_runs
      << " passes: " << result.total_passes
      << " failures: " << result.total_failures
      << " hypothesis_flagged: " << result.total_flagged << "\n";
  for (size_t c = 0; c < matrix.cells.size(); ++c) {
    const CellSummary& cell = result.cells[c];
    out << "cell " << c << ": graph="
        << graph_spec_to_json(matrix.cells[c].graph).dump()
        << " f=" << matrix.cells[c].f << " runs=" << cell.runs
        << " passes=" << cell.passes << " failures=" << cell.failures
        << " hypothesis_flagged=" << cell.flagged << "\n";
  }
  return out.str();
}

}  // namespace byzcast
