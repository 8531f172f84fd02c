#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wn2declare/benchgen.hpp"
#include "wn2declare/conformance.hpp"
#include "wn2declare/declare.hpp"
#include "wn2declare/fsa.hpp"
#include "wn2declare/net.hpp"
#include "wn2declare/pnml.hpp"
#include "wn2declare/state_space.hpp"
#include "wn2declare/synthesis.hpp"

namespace {

using namespace wnd;

// Exit codes: 0 success, 1 negative analysis result (unsafe, unsound, not
// equivalent, violations found), 2 unusable input, 3 output failure,
// 4 state bound exceeded.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kOutputError = 3;
constexpr int kBoundExceeded = 4;

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("failed reading file: " + path);
  return buf.str();
}

// path "-" or "" means stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw OutputError("failed writing: " + path);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t edge_count(const Fsa& f) {
  std::size_t n = 0;
  for (int t : f.delta)
    if (t >= 0) ++n;
  return n;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOpts {
  std::string in;
  std::string dot;
  std::size_t state_limit = 1'000'000;
  bool json = false;
};

int cmd_validate(const ValidateOpts& o) {
  WorkflowNet net = parse_pnml(read_file(o.in));
  nlohmann::ordered_json j;
  j["places"] = net.places.size();
  j["transitions"] = net.transitions.size();
  j["arcs"] = net.arcs.size();

  std::ostringstream text;
  text << "places: " << net.places.size() << "\n"
       << "transitions: " << net.transitions.size() << "\n"
       << "arcs: " << net.arcs.size() << "\n";

  bool ok = true;
  try {
    StateSpace ss = explore(net, o.state_limit);
    SoundnessReport rep = check_soundness(net, ss);
    j["safe"] = true;
    j["states"] = ss.fsa.num_states();
    j["edges"] = edge_count(ss.fsa);
    j["option_to_complete"] = rep.option_to_complete;
    j["proper_completion"] = rep.proper_completion;
    j["no_dead_transitions"] = rep.no_dead_transitions;
    j["sound"] = rep.sound();
    text << "safe: yes\n"
         << "states: " << ss.fsa.num_states() << "\n"
         << "edges: " << edge_count(ss.fsa) << "\n"
         << "option-to-complete: " << yesno(rep.option_to_complete) << "\n";
    if (!rep.option_to_complete) {
      text << "stuck-witness: " << marking_to_string(*rep.option_witness) << "\n";
      j["stuck_witness"] = marking_to_string(*rep.option_witness);
    }
    text << "proper-completion: " << yesno(rep.proper_completion) << "\n";
    if (!rep.proper_completion) {
      text << "improper-witness: " << marking_to_string(*rep.completion_witness) << "\n";
      j["improper_witness"] = marking_to_string(*rep.completion_witness);
    }
    text << "no-dead-transitions: " << yesno(rep.no_dead_transitions) << "\n";
    if (!rep.no_dead_transitions) {
      text << "dead-transitions: " << join(rep.dead) << "\n";
      j["dead_transitions"] = rep.dead;
    }
    text << "sound: " << yesno(rep.sound()) << "\n";
    ok = rep.sound();
    if (!o.dot.empty()) emit(o.dot, to_dot(ss.fsa));
  } catch (const UnsafeError& e) {
    j["safe"] = false;
    j["unsafe_witness"] = marking_to_string(e.witness);
    j["unsafe_firing_sequence"] = e.firing_sequence;
    text << "safe: no\n"
         << "unsafe-witness: " << marking_to_string(e.witness) << "\n"
         << "unsafe-firing-sequence: " << join(e.firing_sequence) << "\n";
    ok = false;
  }

  if (o.json) {
    emit("-", j.dump(2) + "\n");
    std::cerr << (ok ? "net is safe and sound" : "net is not safe and sound") << "\n";
  } else {
    emit("-", text.str());
  }
  return ok ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// synthesize / check share the soundness gate

struct GateOutcome {
  bool ok = false;
  std::string problem;  // set when !ok
};

GateOutcome soundness_gate(const WorkflowNet& net, std::size_t state_limit) {
  try {
    StateSpace ss = explore(net, state_limit);
    SoundnessReport r = check_soundness(net, ss);
    if (r.sound()) return {true, ""};
    std::string why;
    if (!r.option_to_complete)
      why = "no option to complete from " + marking_to_string(*r.option_witness);
    else if (!r.proper_completion)
      why = "improper completion at " + marking_to_string(*r.completion_witness);
    else
      why = "dead transitions: " + join(r.dead);
    return {false, "net is not sound (" + why + ")"};
  } catch (const UnsafeError& e) {
    return {false, "net is not safe (marking " + marking_to_string(e.witness) +
                       " reachable via " + join(e.firing_sequence) + ")"};
  }
}

struct SynthesizeOpts {
  std::string in;
  std::string out = "-";
  std::string format = "text";
  std::size_t state_limit = 1'000'000;
  bool force = false;
};

int cmd_synthesize(const SynthesizeOpts& o) {
  WorkflowNet net = parse_pnml(read_file(o.in));
  try {
    GateOutcome gate = soundness_gate(net, o.state_limit);
    if (!gate.ok) {
      if (!o.force) {
        std::cerr << "refusing to synthesize: " << gate.problem << " (use --force to override)\n";
        return kNegative;
      }
      std::cerr << "warning: " << gate.problem << "; continuing because of --force\n";
    }
  } catch (const BoundError& e) {
    if (!o.force) throw;
    std::cerr << "warning: " << e.what() << "; continuing because of --force\n";
  }
  DeclareSpec spec = synthesize(net);
  emit(o.out, o.format == "json" ? to_json(spec) : to_text(spec));
  std::cerr << "constraints=" << spec.constraints.size() << " literals=" << literal_count(spec)
            << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string in;
  std::string dot;
  std::size_t state_limit = 1'000'000;
  bool json = false;
};

int cmd_verify(const VerifyOpts& o) {
  WorkflowNet net = parse_pnml(read_file(o.in));
  StateSpace ss;
  try {
    ss = explore(net, o.state_limit);
  } catch (const UnsafeError& e) {
    std::cerr << "cannot verify: net is not safe (marking " << marking_to_string(e.witness)
              << " reachable via " << join(e.firing_sequence) << ")\n";
    return kNegative;
  }
  DeclareSpec spec = synthesize(net);
  Fsa sf = spec_fsa_bounded(spec, o.state_limit);
  EquivResult eq = equivalent(ss.fsa, sf);
  if (!o.dot.empty()) emit(o.dot, to_dot(sf));

  std::string accepted_by;
  if (!eq.equivalent)
    accepted_by = accepts(ss.fsa, eq.witness) ? "reachability" : "specification";

  if (o.json) {
    nlohmann::ordered_json j;
    j["constraints"] = spec.constraints.size();
    j["literals"] = literal_count(spec);
    j["reachability_states"] = ss.fsa.num_states();
    j["specification_states"] = sf.num_states();
    j["equivalent"] = eq.equivalent;
    if (!eq.equivalent) {
      j["witness"] = eq.witness;
      j["witness_accepted_by"] = accepted_by;
    }
    emit("-", j.dump(2) + "\n");
    std::cerr << (eq.equivalent ? "equivalent" : "not equivalent") << "\n";
  } else {
    std::ostringstream text;
    text << "constraints: " << spec.constraints.size() << "\n"
         << "literals: " << literal_count(spec) << "\n"
         << "reachability-states: " << ss.fsa.num_states() << "\n"
         << "specification-states: " << sf.num_states() << "\n"
         << "equivalent: " << yesno(eq.equivalent) << "\n";
    if (!eq.equivalent) {
      text << "witness: <" << join(eq.witness) << ">\n"
           << "witness-accepted-by: " << accepted_by << "\n";
    }
    emit("-", text.str());
  }
  return eq.equivalent ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// check

struct CheckOpts {
  std::string in;
  std::string log;
  std::string out = "-";
  std::string policy = "error";
  std::size_t state_limit = 1'000'000;
  bool sort_time = false;
  bool json = false;
  bool force = false;
};

int cmd_check(const CheckOpts& o) {
  DeclareSpec spec;
  if (ends_with(o.in, ".pnml")) {
    WorkflowNet net = parse_pnml(read_file(o.in));
    try {
      GateOutcome gate = soundness_gate(net, o.state_limit);
      if (!gate.ok) {
        if (!o.force) {
          std::cerr << "refusing to check against this net: " << gate.problem
                    << " (use --force to override)\n";
          return kNegative;
        }
        std::cerr << "warning: " << gate.problem << "; continuing because of --force\n";
      }
    } catch (const BoundError& e) {
      if (!o.force) throw;
      std::cerr << "warning: " << e.what() << "; continuing because of --force\n";
    }
    spec = synthesize(net);
  } else if (ends_with(o.in, ".json")) {
    spec = parse_spec_json(read_file(o.in));
  } else if (ends_with(o.in, ".txt")) {
    spec = parse_spec_text(read_file(o.in));
  } else {
    throw std::runtime_error("cannot tell the input kind of '" + o.in +
                             "' (expected .pnml, .txt, or .json)");
  }

  EventLog log;
  if (ends_with(o.log, ".csv"))
    log = parse_csv_log(read_file(o.log));
  else if (ends_with(o.log, ".xes"))
    log = parse_xes_log(read_file(o.log));
  else
    throw std::runtime_error("cannot tell the log kind of '" + o.log + "' (expected .csv or .xes)");

  if (o.sort_time) sort_by_time(log);
  PolicyStats stats = apply_policy(log, spec.alphabet, parse_alphabet_policy(o.policy));
  if (stats.dropped_events || stats.dropped_traces)
    std::cerr << "note: dropped " << stats.dropped_events << " event(s) and "
              << stats.dropped_traces << " trace(s) outside the alphabet\n";

  ConformanceReport rep = check(spec, log);
  emit(o.out, o.json ? report_json(spec, rep) : report_text(spec, rep));
  std::size_t clean_count = 0;
  for (const ConstraintStats& s : rep.per_constraint)
    if (s.violated == 0) ++clean_count;
  std::cerr << "traces: " << rep.traces << "; constraints with fitness 1.0: " << clean_count
            << "/" << rep.per_constraint.size() << "\n";
  return rep.clean() ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::string mode;
  std::string out_dir;
  std::size_t iterations = 10;
};

int cmd_gen(const GenOpts& o) {
  const BenchMode mode = parse_bench_mode(o.mode);
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw OutputError("cannot create directory: " + o.out_dir + " (" + ec.message() + ")");

  ExpansionState st = expansion_base();
  if (mode == BenchMode::FormulaSize) expand_sequential(st);
  for (std::size_t i = 1; i <= o.iterations; ++i) {
    if (mode == BenchMode::ConstraintCount)
      expand_iteration(st);
    else
      expand_alternative(st, 1);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu.pnml", o.mode.c_str(), i);
    const std::string path = (std::filesystem::path(o.out_dir) / name).string();
    emit(path, to_pnml(st.net()));
    std::cout << path << "\n";
  }
  std::cerr << "wrote " << o.iterations << " file(s) to " << o.out_dir << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOpts {
  std::string mode;
  std::string out = "-";
  std::size_t iterations = 200;
  std::size_t audit_every = 10;
  std::size_t audit_state_limit = 50'000;
  std::size_t samples = 3;
};

int cmd_bench(const BenchOpts& o) {
  BenchOptions opt;
  opt.mode = parse_bench_mode(o.mode);
  opt.iterations = o.iterations;
  opt.audit_every = o.audit_every;
  opt.audit_state_limit = o.audit_state_limit;
  opt.samples = o.samples;

  BenchResult result = run_benchmark(opt);
  emit(o.out, bench_csv(result));
  for (const AuditNote& note : result.audits)
    std::cerr << "audit iteration " << note.iteration << ": " << note.status << "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "slope=%.6f ms/iteration r2=%.4f", result.fit.slope,
                result.fit.r2);
  std::cerr << buf << "\n";
  if (!result.audits_ok) {
    std::cerr << "equivalence audits FAILED\n";
    return kNegative;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translate safe and sound workflow nets into equivalent Declare specifications"};
  app.require_subcommand(1);

  ValidateOpts vo;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check workflow-net structure, safety, and soundness");
  validate->add_option("-i,--in", vo.in, "input net (PNML)")->required()->check(CLI::ExistingFile);
  validate->add_option("--state-limit", vo.state_limit, "abort exploration beyond this many markings")
      ->capture_default_str();
  validate->add_option("--dot", vo.dot, "write the reachability automaton as Graphviz DOT");
  validate->add_flag("--json", vo.json, "machine-readable report on stdout");

  SynthesizeOpts so;
  CLI::App* synth = app.add_subcommand(
      "synthesize", "Translate a safe and sound net into a Declare specification");
  synth->add_option("-i,--in", so.in, "input net (PNML)")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--out", so.out, "output file ('-' for stdout)")->capture_default_str();
  synth->add_option("--format", so.format, "specification format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  synth->add_option("--state-limit", so.state_limit, "abort exploration beyond this many markings")
      ->capture_default_str();
  synth->add_flag("--force", so.force, "synthesize even if the net is not safe and sound");

  VerifyOpts ro;
  CLI::App* verify = app.add_subcommand(
      "verify", "Prove the synthesized specification equivalent to the net");
  verify->add_option("-i,--in", ro.in, "input net (PNML)")->required()->check(CLI::ExistingFile);
  verify->add_option("--state-limit", ro.state_limit, "abort exploration beyond this many markings")
      ->capture_default_str();
  verify->add_option("--dot", ro.dot, "write the specification automaton as Graphviz DOT");
  verify->add_flag("--json", ro.json, "machine-readable report on stdout");

  CheckOpts co;
  CLI::App* check = app.add_subcommand(
      "check", "Replay an event log against a specification (or a net's specification)");
  check->add_option("-i,--in", co.in, "net (.pnml) or specification (.txt/.json)")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("-l,--log", co.log, "event log (.csv or .xes)")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("-o,--out", co.out, "report file ('-' for stdout)")->capture_default_str();
  check->add_option("--alphabet-policy", co.policy,
                    "out-of-alphabet activities: error, skip-event, or skip-trace")
      ->check(CLI::IsMember({"error", "skip-event", "skip-trace"}))
      ->capture_default_str();
  check->add_option("--state-limit", co.state_limit, "abort exploration beyond this many markings")
      ->capture_default_str();
  check->add_flag("--sort-by-time", co.sort_time, "sort each case's events by timestamp");
  check->add_flag("--json", co.json, "machine-readable report");
  check->add_flag("--force", co.force, "accept nets that are not safe and sound");

  GenOpts go;
  CLI::App* gen = app.add_subcommand("gen", "Write a series of expanded benchmark nets as PNML");
  gen->add_option("mode", go.mode, "constraint-count or formula-size")
      ->required()
      ->check(CLI::IsMember({"constraint-count", "formula-size"}));
  gen->add_option("-o,--out", go.out_dir, "output directory")->required();
  gen->add_option("-n,--iterations", go.iterations, "number of expansion iterations")
      ->capture_default_str();

  BenchOpts bo;
  CLI::App* bench = app.add_subcommand("bench", "Measure synthesis scaling over expanded nets");
  bench->add_option("mode", bo.mode, "constraint-count or formula-size")
      ->required()
      ->check(CLI::IsMember({"constraint-count", "formula-size"}));
  bench->add_option("-o,--out", bo.out, "CSV output ('-' for stdout)")->capture_default_str();
  bench->add_option("-n,--iterations", bo.iterations, "number of expansion iterations")
      ->capture_default_str();
  bench->add_option("--audit-every", bo.audit_every,
                    "equivalence-audit cadence in iterations (0 disables)")
      ->capture_default_str();
  bench->add_option("--audit-state-limit", bo.audit_state_limit,
                    "skip audits whose state space exceeds this bound")
      ->capture_default_str();
  bench->add_option("--samples", bo.samples, "timing samples per iteration")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(vo);
    if (synth->parsed()) return cmd_synthesize(so);
    if (verify->parsed()) return cmd_verify(ro);
    if (check->parsed()) return cmd_check(co);
    if (gen->parsed()) return cmd_gen(go);
    if (bench->parsed()) return cmd_bench(bo);
  } catch (const BoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBoundExceeded;
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOutputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;  // unreachable: a subcommand is required
}
