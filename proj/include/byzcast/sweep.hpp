#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "byzcast/serialize.hpp"
#include "byzcast/simulator.hpp"

namespace byzcast {

struct InputsSpec {
  enum class Mode { exhaustive, samples, list };
  Mode mode = Mode::exhaustive;
  int samples = 64;
  std::vector<std::string> list;

  bool operator==(const InputsSpec&) const = default;
};

/// One block of the sweep matrix; expands to graph x faulty-set x adversary
/// x input scenarios.
struct MatrixCell {
  GraphSpec graph;
  int f = 0;
  /// nullopt = every subset of size <= f.
  std::optional<std::vector<std::vector<NodeId>>> faulty_sets;
  std::vector<AdversaryStrategy> adversaries;  // empty = full strategy library
  /// Defaults to exhaustive for n <= 6 and 64 seeded samples otherwise.
  std::optional<InputsSpec> inputs;
  std::uint64_t seed = 0;
};

struct SweepMatrix {
  std::vector<MatrixCell> cells;
};

OrderedJson matrix_to_json(const SweepMatrix& m);
SweepMatrix matrix_from_json(const OrderedJson& j);
SweepMatrix load_matrix_file(const std::string& path);

/// The default adversary library: one of each strategy plus three seeds of
/// the randomized one.
std::vector<AdversaryStrategy> default_adversaries();

/// Input assignments for one cell: exhaustive for n <= 6, otherwise
/// all-zeros, all-ones, and seeded distinct samples up to the requested
/// count.
std::vector<std::vector<Bit>> expand_inputs(const InputsSpec& spec, int n,
                                            std::uint64_t seed);

std::vector<Scenario> expand_cell(const MatrixCell& cell);

struct RunOutcome {
  int cell = 0;
  std::string hash;
  bool hypothesis_ok = false;
  bool aborted = false;        // NoPath / PathConstructionFailed surfaced
  std::string abort_reason;
  bool pass = false;           // hypothesis_ok && verdict.all_ok && !aborted
  Verdict verdict;
};

struct CellSummary {
  int runs = 0;
  int passes = 0;
  int failures = 0;  // hypothesis-satisfying runs that violated a guarantee
  int flagged = 0;   // hypothesis-violating runs, reported but not asserted
  std::vector<std::string> failing_scenarios;  // canonical scenario JSON
};

struct SweepResult {
  std::vector<CellSummary> cells;
  int total_runs = 0;
  int total_passes = 0;
  int total_failures = 0;
  int total_flagged = 0;
};

struct SweepOptions {
  int workers = 1;
  std::string out_dir;        // empty = do not persist
  bool write_traces = true;
  bool allow_large = false;
};

/// Runs every cell scenario (worker threads over a shared queue; one
/// immutable context per distinct (graph, f)), verifies each trace, and
/// optionally persists trace + verdict under content-addressed names.
SweepResult run_sweep(const SweepMatrix& matrix, const SweepOptions& options);

/// Stable structured-text aggregate: one line per cell plus totals.
std::string aggregate_report(const SweepMatrix& matrix, const SweepResult& result);

}  // namespace byzcast
