#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wn2declare/declare.hpp"

namespace wnd {

struct ConformanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Event {
  std::string activity;
  std::string timestamp;  // empty when the source carried none
};

struct CaseTrace {
  std::string case_id;
  std::vector<Event> events;
};

struct EventLog {
  std::vector<CaseTrace> traces;  // ordered by first appearance of the case
};

// CSV subset: header `case,activity[,timestamp]`, RFC-4180 quoting.
EventLog parse_csv_log(const std::string& bytes);

// XES subset: case ids and activities from concept:name, timestamps from
// time:timestamp.  Unknown elements and attributes are ignored.
EventLog parse_xes_log(const std::string& bytes);

// Stable per-trace sort on timestamps.  Numeric comparison when every
// timestamp parses as a number, lexicographic otherwise; throws if any event
// lacks a timestamp.
void sort_by_time(EventLog& log);

// What to do with activities outside the specification alphabet.
enum class AlphabetPolicy { Error, SkipEvent, SkipTrace };

AlphabetPolicy parse_alphabet_policy(const std::string& name);

struct PolicyStats {
  std::size_t dropped_events = 0;
  std::size_t dropped_traces = 0;
};

// Restricts the log to the given alphabet in place.
PolicyStats apply_policy(EventLog& log, const std::vector<std::string>& alphabet,
                         AlphabetPolicy policy);

inline constexpr std::size_t kViolatingSample = 20;

struct ConstraintStats {
  std::uint64_t satisfied = 0;
  std::uint64_t violated = 0;
  std::vector<std::string> violating_cases;  // first kViolatingSample, in log order
  double fitness() const;                    // satisfied / (satisfied + violated); 1.0 when unobserved
};

struct ConformanceReport {
  std::size_t traces = 0;
  std::vector<ConstraintStats> per_constraint;  // parallel to spec.constraints
  bool clean() const;                           // every fitness == 1.0
};

// Replays every trace through every constraint automaton.  check() runs the
// parallel kernel when OpenMP is available; check_serial() is the reference
// implementation and always produces an identical report.
ConformanceReport check(const DeclareSpec& spec, const EventLog& log);
ConformanceReport check_serial(const DeclareSpec& spec, const EventLog& log);

// Diagnostics rendering: per-constraint table, fitness bins below 1.0
// ([0,0.1), [0.1,0.5), [0.5,0.9), [0.9,1.0)), clean list, violating samples.
std::string report_text(const DeclareSpec& spec, const ConformanceReport& rep);
std::string report_json(const DeclareSpec& spec, const ConformanceReport& rep);

}  // namespace wnd
