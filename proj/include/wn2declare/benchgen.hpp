#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wn2declare/net.hpp"

namespace wnd {

// constraint-count: each iteration wraps the pivot in fresh sequential,
// parallel, conditional, and loop structure (+6 places, +7 transitions,
// +16 arcs), so the constraint count grows linearly with the iteration.
// formula-size: the net keeps four places while fresh alternatives to the
// pivot fatten two constraints' parameter sets, growing formula size only.
enum class BenchMode { ConstraintCount, FormulaSize };

BenchMode parse_bench_mode(const std::string& name);

struct ExpansionState {
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<Arc> arcs;
  std::string pivot;          // transition the rules are applied around
  std::string boundary_pre;   // place feeding the expansion region
  std::string boundary_post;  // place fed by the expansion region
  std::size_t next_place = 0;
  std::size_t next_transition = 0;

  WorkflowNet net() const;  // validated snapshot
};

// Source -> pivot -> sink: the smallest workflow net.
ExpansionState expansion_base();

// Flanks the pivot with fresh entry/exit transitions and places; the
// boundary moves inward to the places adjacent to the pivot.
void expand_sequential(ExpansionState& st);

// One full soundness-preserving iteration: sequential, parallel (a fresh
// branch between the entry and exit transitions), conditional (a bypass
// across the old boundary), and loop (a rework path around the region).
void expand_iteration(ExpansionState& st);

// Adds `count` fresh transitions with the same preset/postset as the pivot.
// Requires the boundary places to flank the pivot, which every expansion
// rule re-establishes; a hand-built state that breaks it is rejected.
void expand_alternative(ExpansionState& st, std::size_t count);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;  // 1 - SS_res/SS_tot; 1 when the ys are constant
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchRow {
  std::size_t iteration = 0;
  std::size_t places = 0;
  std::size_t transitions = 0;
  std::size_t arcs = 0;
  std::size_t constraints = 0;
  std::size_t literals = 0;
  double time_ms = 0.0;  // best-of-samples per-call synthesis time
  double mem_mb = 0.0;   // peak-RSS growth observed during this iteration
};

struct AuditNote {
  std::size_t iteration = 0;
  bool ok = true;  // false only on a real failure, not on a skipped audit
  std::string status;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  LinearFit fit;  // time_ms against iteration
  std::vector<AuditNote> audits;
  bool audits_ok = true;
};

struct BenchOptions {
  BenchMode mode = BenchMode::ConstraintCount;
  std::size_t iterations = 200;
  std::size_t audit_every = 10;  // 0 disables equivalence audits
  std::size_t audit_state_limit = 50'000;
  std::size_t samples = 3;  // timing samples per iteration
};

BenchResult run_benchmark(const BenchOptions& opt);

// Comment header, CSV rows, and a trailing one-line JSON stats object.
std::string bench_csv(const BenchResult& result);

// Peak resident set (VmHWM) in megabytes; 0 when unavailable.
double vm_hwm_mb();

}  // namespace wnd
