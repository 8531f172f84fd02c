#include "wn2declare/benchgen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wn2declare/fsa.hpp"
#include "wn2declare/state_space.hpp"
#include "wn2declare/synthesis.hpp"

namespace wnd {

BenchMode parse_bench_mode(const std::string& name) {
  if (name == "constraint-count") return BenchMode::ConstraintCount;
  if (name == "formula-size") return BenchMode::FormulaSize;
  throw std::runtime_error("unknown benchmark mode '" + name +
                           "' (expected constraint-count or formula-size)");
}

WorkflowNet ExpansionState::net() const { return make_net(places, transitions, arcs); }

namespace {

std::string fresh_place(ExpansionState& st) {
  std::string id = "p_gen_" + std::to_string(st.next_place++);
  st.places.push_back(id);
  return id;
}

std::string fresh_transition(ExpansionState& st) {
  std::string id = "t_gen_" + std::to_string(st.next_transition++);
  st.transitions.push_back(id);
  return id;
}

void add_arc(ExpansionState& st, const std::string& from, const std::string& to) {
  st.arcs.emplace_back(from, to);
}

void remove_arc(ExpansionState& st, const std::string& from, const std::string& to) {
  auto it = std::find(st.arcs.begin(), st.arcs.end(), Arc{from, to});
  if (it == st.arcs.end())
    throw std::logic_error("expansion: expected arc (" + from + ", " + to + ") is missing");
  st.arcs.erase(it);
}

struct Flank {
  std::string entry;  // transition guarding the region entrance
  std::string exit;   // transition guarding the region exit
  std::string x, y;   // fresh places adjacent to the pivot
};

// Replaces boundary_pre -> pivot -> boundary_post with
// boundary_pre -> entry -> x -> pivot -> y -> exit -> boundary_post.
Flank flank_pivot(ExpansionState& st) {
  Flank f;
  f.x = fresh_place(st);
  f.y = fresh_place(st);
  f.entry = fresh_transition(st);
  f.exit = fresh_transition(st);
  remove_arc(st, st.boundary_pre, st.pivot);
  remove_arc(st, st.pivot, st.boundary_post);
  add_arc(st, st.boundary_pre, f.entry);
  add_arc(st, f.entry, f.x);
  add_arc(st, f.x, st.pivot);
  add_arc(st, st.pivot, f.y);
  add_arc(st, f.y, f.exit);
  add_arc(st, f.exit, st.boundary_post);
  return f;
}

}  // namespace

ExpansionState expansion_base() {
  ExpansionState st;
  st.places = {"p1", "p2"};
  st.transitions = {"t1"};
  st.arcs = {{"p1", "t1"}, {"t1", "p2"}};
  st.pivot = "t1";
  st.boundary_pre = "p1";
  st.boundary_post = "p2";
  return st;
}

void expand_sequential(ExpansionState& st) {
  Flank f = flank_pivot(st);
  st.boundary_pre = f.x;
  st.boundary_post = f.y;
}

void expand_iteration(ExpansionState& st) {
  const std::string old_pre = st.boundary_pre;
  const std::string old_post = st.boundary_post;

  // Sequential: entry/exit transitions around the pivot.
  Flank f = flank_pivot(st);

  // Parallel: a second branch carried between entry and exit.
  std::string x2 = fresh_place(st);
  std::string y2 = fresh_place(st);
  std::string t_par = fresh_transition(st);
  add_arc(st, f.entry, x2);
  add_arc(st, x2, t_par);
  add_arc(st, t_par, y2);
  add_arc(st, y2, f.exit);

  // Conditional: a bypass across the whole region.
  std::string t_byp = fresh_transition(st);
  add_arc(st, old_pre, t_byp);
  add_arc(st, t_byp, old_post);

  // Loop: guarded entry/exit places with a rework transition, so the region
  // between them can repeat.
  std::string w1 = fresh_place(st);
  std::string w2 = fresh_place(st);
  std::string t_loop_in = fresh_transition(st);
  std::string t_loop_out = fresh_transition(st);
  std::string t_loop_back = fresh_transition(st);
  remove_arc(st, old_pre, f.entry);
  add_arc(st, old_pre, t_loop_in);
  add_arc(st, t_loop_in, w1);
  add_arc(st, w1, f.entry);
  remove_arc(st, f.exit, old_post);
  add_arc(st, f.exit, w2);
  add_arc(st, w2, t_loop_out);
  add_arc(st, t_loop_out, old_post);
  add_arc(st, w2, t_loop_back);
  add_arc(st, t_loop_back, w1);

  st.boundary_pre = f.x;
  st.boundary_post = f.y;
}

void expand_alternative(ExpansionState& st, std::size_t count) {
  const Arc in{st.boundary_pre, st.pivot};
  const Arc out{st.pivot, st.boundary_post};
  if (std::find(st.arcs.begin(), st.arcs.end(), in) == st.arcs.end() ||
      std::find(st.arcs.begin(), st.arcs.end(), out) == st.arcs.end())
    throw std::logic_error("expand_alternative: boundary places must flank the pivot");
  for (std::size_t i = 0; i < count; ++i) {
    std::string t = fresh_transition(st);
    add_arc(st, st.boundary_pre, t);
    add_arc(st, t, st.boundary_post);
  }
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("linear_fit: length mismatch");
  LinearFit fit;
  const std::size_t n = xs.size();
  if (n == 0) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxx == 0 ? 0.0 : sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

double vm_hwm_mb() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      double kb = 0;
      fields >> kb;
      return kb / 1024.0;
    }
  }
  return 0.0;
}

namespace {

// Mean per-call synthesis time, sampled over a window long enough to be
// meaningful on small nets.
double time_synthesize_ms(const WorkflowNet& net) {
  using clock = std::chrono::steady_clock;
  volatile std::size_t sink = 0;
  int runs = 0;
  const auto t0 = clock::now();
  double elapsed = 0.0;
  do {
    DeclareSpec spec = synthesize(net);
    sink = sink + spec.constraints.size();
    ++runs;
    elapsed = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  } while (elapsed < 3.0 && runs < 1000);
  (void)sink;
  return elapsed / runs;
}

AuditNote audit_iteration(std::size_t iteration, const WorkflowNet& net,
                          std::size_t state_limit) {
  AuditNote note;
  note.iteration = iteration;
  try {
    StateSpace ss = explore(net, state_limit);
    SoundnessReport sound = check_soundness(net, ss);
    if (!sound.sound()) {
      note.ok = false;
      note.status = "FAILED: expanded net is not sound";
      return note;
    }
    DeclareSpec spec = synthesize(net);
    EquivResult eq = equivalent(ss.fsa, spec_fsa_bounded(spec, state_limit));
    if (eq.equivalent) {
      note.status = "equivalent (" + std::to_string(ss.fsa.num_states()) + " states)";
    } else {
      note.ok = false;
      std::string w;
      for (const std::string& s : eq.witness) w += (w.empty() ? "" : " ") + s;
      note.status = "FAILED: languages differ, witness <" + w + ">";
    }
  } catch (const BoundError&) {
    note.status = "skipped (state bound " + std::to_string(state_limit) + " exceeded)";
  } catch (const std::exception& e) {
    note.ok = false;
    note.status = std::string("FAILED: ") + e.what();
  }
  return note;
}

}  // namespace

BenchResult run_benchmark(const BenchOptions& opt) {
  ExpansionState st = expansion_base();
  if (opt.mode == BenchMode::FormulaSize) expand_sequential(st);

  BenchResult result;
  result.rows.reserve(opt.iterations);
  for (std::size_t i = 1; i <= opt.iterations; ++i) {
    if (opt.mode == BenchMode::ConstraintCount)
      expand_iteration(st);
    else
      expand_alternative(st, 1);
    const WorkflowNet net = st.net();
    const DeclareSpec spec = synthesize(net);

    BenchRow row;
    row.iteration = i;
    row.places = net.places.size();
    row.transitions = net.transitions.size();
    row.arcs = net.arcs.size();
    row.constraints = spec.constraints.size();
    row.literals = literal_count(spec);

    // Scheduler preemption only ever adds time, so the fastest sample is the
    // least contaminated estimate of the true cost.
    const double hwm_before = vm_hwm_mb();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < opt.samples; ++s) best = std::min(best, time_synthesize_ms(net));
    row.time_ms = opt.samples ? best : 0.0;
    row.mem_mb = std::max(0.0, vm_hwm_mb() - hwm_before);
    result.rows.push_back(row);

    if (opt.audit_every != 0 && i % opt.audit_every == 0) {
      AuditNote note = audit_iteration(i, net, opt.audit_state_limit);
      if (!note.ok) result.audits_ok = false;
      result.audits.push_back(std::move(note));
    }
  }

  std::vector<double> xs, ys;
  xs.reserve(result.rows.size());
  ys.reserve(result.rows.size());
  for (const BenchRow& r : result.rows) {
    xs.push_back(static_cast<double>(r.iteration));
    ys.push_back(r.time_ms);
  }
  result.fit = linear_fit(xs, ys);
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "# time_ms: best-of-samples per-call synthesis time; mem_mb: peak-RSS (VmHWM) growth\n";
  out << "iteration,places,transitions,arcs,constraints,literals,time_ms,mem_mb\n";
  char buf[64];
  for (const BenchRow& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.3f", r.time_ms, r.mem_mb);
    out << r.iteration << ',' << r.places << ',' << r.transitions << ',' << r.arcs << ','
        << r.constraints << ',' << r.literals << ',' << buf << "\n";
  }
  nlohmann::ordered_json stats;
  stats["r2"] = result.fit.r2;
  stats["beta"] = result.fit.slope;
  out << stats.dump() << "\n";
  return out.str();
}

}  // namespace wnd
