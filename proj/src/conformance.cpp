#include "wn2declare/conformance.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "wn2declare/fsa.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wnd {

namespace {

// RFC-4180-ish: quoted fields with "" escapes, \r\n or \n records, no
// trailing-newline requirement.  Records that are a single empty field
// (blank lines) are dropped.
std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
  };
  auto end_record = [&]() {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(record);
    record.clear();
  };
  while (i < s.size()) {
    char c = s[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++i;
    } else if (c == '"' && field.empty()) {
      quoted = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n') {
      end_record();
      ++i;
    } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
      end_record();
      i += 2;
    } else {
      field += c;
      ++i;
    }
  }
  if (quoted) throw ConformanceError("csv: unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

EventLog group_by_case(const std::vector<std::pair<std::string, Event>>& rows) {
  EventLog log;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [case_id, ev] : rows) {
    auto it = index.find(case_id);
    if (it == index.end()) {
      index.emplace(case_id, log.traces.size());
      log.traces.push_back(CaseTrace{case_id, {ev}});
    } else {
      log.traces[it->second].events.push_back(ev);
    }
  }
  return log;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size();
}

}  // namespace

EventLog parse_csv_log(const std::string& bytes) {
  std::vector<std::vector<std::string>> records = parse_csv(bytes);
  if (records.empty()) throw ConformanceError("csv: empty log (missing header)");
  const std::vector<std::string>& header = records[0];
  if (header.size() < 2 || header[0] != "case" || header[1] != "activity")
    throw ConformanceError("csv: header must be case,activity[,timestamp]");
  if (header.size() == 3 && header[2] != "timestamp")
    throw ConformanceError("csv: third column must be timestamp, got '" + header[2] + "'");
  if (header.size() > 3) throw ConformanceError("csv: at most three columns are supported");
  std::vector<std::pair<std::string, Event>> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::vector<std::string>& rec = records[r];
    if (rec.size() != header.size())
      throw ConformanceError("csv: row " + std::to_string(r + 1) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(header.size()));
    if (rec[0].empty()) throw ConformanceError("csv: row " + std::to_string(r + 1) + ": empty case id");
    if (rec[1].empty()) throw ConformanceError("csv: row " + std::to_string(r + 1) + ": empty activity");
    Event ev;
    ev.activity = rec[1];
    if (rec.size() == 3) ev.timestamp = rec[2];
    rows.emplace_back(rec[0], ev);
  }
  return group_by_case(rows);
}

EventLog parse_xes_log(const std::string& bytes) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  std::istringstream in(bytes);
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ConformanceError(std::string("xes: malformed XML: ") + e.what());
  }
  auto root = doc.get_child_optional("log");
  if (!root) throw ConformanceError("xes: missing <log> root element");

  auto attr_of = [](const pt::ptree& node, const std::string& key) -> std::string {
    // <string key="..." value="..."/> (or <date .../> for timestamps)
    for (const auto& [name, child] : node) {
      if (name != "string" && name != "date") continue;
      if (child.get<std::string>("<xmlattr>.key", "") == key)
        return child.get<std::string>("<xmlattr>.value", "");
    }
    return "";
  };

  EventLog log;
  std::size_t trace_no = 0;
  for (const auto& [name, tr] : *root) {
    if (name != "trace") continue;
    ++trace_no;
    CaseTrace trace;
    trace.case_id = attr_of(tr, "concept:name");
    if (trace.case_id.empty()) trace.case_id = "trace_" + std::to_string(trace_no);
    std::size_t event_no = 0;
    for (const auto& [ename, ev] : tr) {
      if (ename != "event") continue;
      ++event_no;
      Event e;
      e.activity = attr_of(ev, "concept:name");
      if (e.activity.empty())
        throw ConformanceError("xes: trace '" + trace.case_id + "' event " +
                               std::to_string(event_no) + " has no concept:name");
      e.timestamp = attr_of(ev, "time:timestamp");
      trace.events.push_back(e);
    }
    log.traces.push_back(std::move(trace));
  }
  return log;
}

void sort_by_time(EventLog& log) {
  bool numeric = true;
  for (const CaseTrace& t : log.traces)
    for (const Event& e : t.events) {
      if (e.timestamp.empty())
        throw ConformanceError("sort-by-time: case '" + t.case_id + "' has an event without a timestamp");
      double unused;
      if (!parse_number(e.timestamp, unused)) numeric = false;
    }
  for (CaseTrace& t : log.traces) {
    if (numeric) {
      std::stable_sort(t.events.begin(), t.events.end(), [](const Event& a, const Event& b) {
        double x, y;
        parse_number(a.timestamp, x);
        parse_number(b.timestamp, y);
        return x < y;
      });
    } else {
      std::stable_sort(t.events.begin(), t.events.end(),
                       [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    }
  }
}

AlphabetPolicy parse_alphabet_policy(const std::string& name) {
  if (name == "error") return AlphabetPolicy::Error;
  if (name == "skip-event") return AlphabetPolicy::SkipEvent;
  if (name == "skip-trace") return AlphabetPolicy::SkipTrace;
  throw ConformanceError("unknown alphabet policy '" + name +
                         "' (expected error, skip-event, or skip-trace)");
}

PolicyStats apply_policy(EventLog& log, const std::vector<std::string>& alphabet,
                         AlphabetPolicy policy) {
  std::unordered_set<std::string> known(alphabet.begin(), alphabet.end());
  PolicyStats stats;
  std::vector<CaseTrace> kept;
  kept.reserve(log.traces.size());
  for (CaseTrace& t : log.traces) {
    bool drop_trace = false;
    std::vector<Event> events;
    events.reserve(t.events.size());
    for (Event& e : t.events) {
      if (known.count(e.activity)) {
        events.push_back(std::move(e));
        continue;
      }
      switch (policy) {
        case AlphabetPolicy::Error:
          throw ConformanceError("case '" + t.case_id + "': activity '" + e.activity +
                                 "' is not in the specification alphabet");
        case AlphabetPolicy::SkipEvent:
          ++stats.dropped_events;
          break;
        case AlphabetPolicy::SkipTrace:
          drop_trace = true;
          break;
      }
      if (drop_trace) break;
    }
    if (drop_trace) {
      ++stats.dropped_traces;
    } else {
      t.events = std::move(events);
      kept.push_back(std::move(t));
    }
  }
  log.traces = std::move(kept);
  return stats;
}

double ConstraintStats::fitness() const {
  const std::uint64_t total = satisfied + violated;
  if (total == 0) return 1.0;
  return static_cast<double>(satisfied) / static_cast<double>(total);
}

bool ConformanceReport::clean() const {
  for (const ConstraintStats& c : per_constraint)
    if (c.violated != 0) return false;
  return true;
}

namespace {

struct Kernel {
  std::vector<Fsa> fsas;
  std::unordered_map<std::string, int> sym;
  int k = 0;  // alphabet size

  explicit Kernel(const DeclareSpec& spec) {
    fsas.reserve(spec.constraints.size());
    for (const Constraint& c : spec.constraints) fsas.push_back(constraint_fsa(c, spec.alphabet));
    for (std::size_t i = 0; i < spec.alphabet.size(); ++i)
      sym.emplace(spec.alphabet[i], static_cast<int>(i));
    k = static_cast<int>(spec.alphabet.size());
  }

  std::vector<int> encode(const CaseTrace& t) const {
    std::vector<int> ids;
    ids.reserve(t.events.size());
    for (const Event& e : t.events) {
      auto it = sym.find(e.activity);
      if (it == sym.end())
        throw ConformanceError("case '" + t.case_id + "': activity '" + e.activity +
                               "' is not in the specification alphabet; apply an alphabet policy");
      ids.push_back(it->second);
    }
    return ids;
  }

  bool replay(std::size_t c, const std::vector<int>& ids) const {
    const Fsa& f = fsas[c];
    int state = f.initial;
    for (int id : ids) state = f.delta[static_cast<std::size_t>(state) * k + id];
    return f.accepting[state] != 0;
  }
};

ConformanceReport run_check(const DeclareSpec& spec, const EventLog& log, bool parallel) {
  const Kernel kernel(spec);
  const std::size_t nc = spec.constraints.size();
  const std::size_t nt = log.traces.size();

  ConformanceReport rep;
  rep.traces = nt;
  rep.per_constraint.assign(nc, ConstraintStats{});

  int threads = 1;
#ifdef _OPENMP
  if (parallel) threads = omp_get_max_threads();
#else
  (void)parallel;
#endif

  // Per-thread tallies; violating traces recorded by index so the merged
  // sample is the first kViolatingSample in log order regardless of the
  // number of threads.
  std::vector<std::vector<std::uint64_t>> sat(threads, std::vector<std::uint64_t>(nc, 0));
  std::vector<std::vector<std::uint64_t>> vio(threads, std::vector<std::uint64_t>(nc, 0));
  std::vector<std::vector<std::vector<std::size_t>>> samples(
      threads, std::vector<std::vector<std::size_t>>(nc));
  std::vector<std::string> errors(threads);

  auto body = [&](int tid, std::size_t i) {
    try {
      const std::vector<int> ids = kernel.encode(log.traces[i]);
      for (std::size_t c = 0; c < nc; ++c) {
        if (kernel.replay(c, ids)) {
          ++sat[tid][c];
        } else {
          ++vio[tid][c];
          if (samples[tid][c].size() < kViolatingSample) samples[tid][c].push_back(i);
        }
      }
    } catch (const std::exception& e) {
      if (errors[tid].empty()) errors[tid] = e.what();
    }
  };

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel num_threads(threads)
    {
      const int tid = omp_get_thread_num();
#pragma omp for schedule(static)
      for (long i = 0; i < static_cast<long>(nt); ++i) body(tid, static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < nt; ++i) body(0, i);
  }
#else
  for (std::size_t i = 0; i < nt; ++i) body(0, i);
#endif

  for (const std::string& err : errors)
    if (!err.empty()) throw ConformanceError(err);

  for (std::size_t c = 0; c < nc; ++c) {
    ConstraintStats& out = rep.per_constraint[c];
    std::vector<std::size_t> merged;
    for (int t = 0; t < threads; ++t) {
      out.satisfied += sat[t][c];
      out.violated += vio[t][c];
      // schedule(static) assigns ascending contiguous chunks by thread id, so
      // appending in thread order keeps the indices sorted.
      merged.insert(merged.end(), samples[t][c].begin(), samples[t][c].end());
    }
    std::sort(merged.begin(), merged.end());
    if (merged.size() > kViolatingSample) merged.resize(kViolatingSample);
    for (std::size_t i : merged) out.violating_cases.push_back(log.traces[i].case_id);
  }
  return rep;
}

constexpr const char* kBinNames[4] = {"[0.0,0.1)", "[0.1,0.5)", "[0.5,0.9)", "[0.9,1.0)"};

int bin_of(double fitness) {
  // Only constraints below 1.0 are binned.
  if (fitness < 0.1) return 0;
  if (fitness < 0.5) return 1;
  if (fitness < 0.9) return 2;
  if (fitness < 1.0) return 3;
  return -1;
}

}  // namespace

ConformanceReport check(const DeclareSpec& spec, const EventLog& log) {
  return run_check(spec, log, true);
}

ConformanceReport check_serial(const DeclareSpec& spec, const EventLog& log) {
  return run_check(spec, log, false);
}

std::string report_text(const DeclareSpec& spec, const ConformanceReport& rep) {
  std::ostringstream out;
  out << "traces: " << rep.traces << "\n";

  std::vector<std::string> names;
  names.reserve(spec.constraints.size());
  std::size_t width = std::string("constraint").size();
  for (const Constraint& c : spec.constraints) {
    names.push_back(constraint_to_string(c));
    width = std::max(width, names.back().size());
  }

  auto pad = [width](const std::string& s) {
    return s + std::string(width - s.size(), ' ');
  };
  char buf[64];
  out << pad("constraint") << "  satisfied  violated  fitness\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const ConstraintStats& s = rep.per_constraint[i];
    std::snprintf(buf, sizeof buf, "  %9llu  %8llu  %.4f",
                  static_cast<unsigned long long>(s.satisfied),
                  static_cast<unsigned long long>(s.violated), s.fitness());
    out << pad(names[i]) << buf << "\n";
  }

  out << "fitness bins (constraints below 1.0):\n";
  for (int b = 0; b < 4; ++b) {
    out << "  " << kBinNames[b] << ":";
    bool any = false;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (bin_of(rep.per_constraint[i].fitness()) == b) {
        out << (any ? ", " : " ") << names[i];
        any = true;
      }
    if (!any) out << " -";
    out << "\n";
  }
  std::size_t clean_count = 0;
  for (const ConstraintStats& s : rep.per_constraint)
    if (bin_of(s.fitness()) < 0) ++clean_count;
  out << "clean (fitness 1.0): " << clean_count << " of " << names.size() << " constraints\n";

  bool any_samples = false;
  for (const ConstraintStats& s : rep.per_constraint)
    if (!s.violating_cases.empty()) any_samples = true;
  if (any_samples) {
    out << "violating cases (up to " << kViolatingSample << " per constraint):\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      const ConstraintStats& s = rep.per_constraint[i];
      if (s.violating_cases.empty()) continue;
      out << "  " << names[i] << ":";
      for (std::size_t k = 0; k < s.violating_cases.size(); ++k)
        out << (k ? ", " : " ") << s.violating_cases[k];
      if (s.violated > s.violating_cases.size())
        out << " (+" << (s.violated - s.violating_cases.size()) << " more)";
      out << "\n";
    }
  }
  return out.str();
}

std::string report_json(const DeclareSpec& spec, const ConformanceReport& rep) {
  nlohmann::ordered_json j;
  j["traces"] = rep.traces;
  j["constraints"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    const ConstraintStats& s = rep.per_constraint[i];
    nlohmann::ordered_json c;
    c["constraint"] = constraint_to_string(spec.constraints[i]);
    c["template"] = template_name(spec.constraints[i].tmpl);
    c["params"] = spec.constraints[i].params;
    c["satisfied"] = s.satisfied;
    c["violated"] = s.violated;
    c["fitness"] = s.fitness();
    c["violating_cases"] = s.violating_cases;
    j["constraints"].push_back(std::move(c));
  }
  nlohmann::ordered_json bins;
  for (const char* name : kBinNames) bins[name] = nlohmann::ordered_json::array();
  nlohmann::ordered_json clean = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    const int b = bin_of(rep.per_constraint[i].fitness());
    const std::string name = constraint_to_string(spec.constraints[i]);
    if (b < 0)
      clean.push_back(name);
    else
      bins[kBinNames[b]].push_back(name);
  }
  bins["clean"] = std::move(clean);
  j["bins"] = std::move(bins);
  return j.dump(2) + "\n";
}

}  // namespace wnd
