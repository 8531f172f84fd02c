#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wn2declare/fsa.hpp"
#include "wn2declare/net.hpp"

namespace wnd {

struct UnsafeError : NetError {
  Marking witness;
  std::vector<std::string> firing_sequence;  // produces the witness from the initial marking
  UnsafeError(std::string msg, Marking w, std::vector<std::string> seq)
      : NetError(std::move(msg)), witness(std::move(w)), firing_sequence(std::move(seq)) {}
};

struct BoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateSpace {
  std::vector<Marking> markings;  // breadth-first order, index 0 = initial marking
  Fsa fsa;  // alphabet = all transitions; the final marking is the accepting state
};

// Breadth-first search over reachable markings with exact counts; the first
// marking that puts two tokens on a place aborts with UnsafeError (witness
// marking plus a producing firing sequence), and exceeding max_states aborts
// with BoundError rather than diverging.
StateSpace explore(const WorkflowNet& net, std::size_t max_states = 1'000'000);

struct SoundnessReport {
  bool option_to_complete = true;
  std::optional<Marking> option_witness;  // reachable marking that cannot complete
  bool proper_completion = true;
  std::optional<Marking> completion_witness;  // sink marked alongside other tokens
  bool no_dead_transitions = true;
  std::vector<std::string> dead;

  bool sound() const { return option_to_complete && proper_completion && no_dead_transitions; }
};

// Option to complete via backward reachability from the final marking over
// reversed edges; proper completion by scanning markings with a marked sink;
// dead transitions are those labeling no edge.
SoundnessReport check_soundness(const WorkflowNet& net, const StateSpace& ss);

// Depth-first enumeration of complete runs of length <= max_len, transitions
// tried in lexicographic order; stops once max_count runs are collected.
std::vector<std::vector<std::string>> language_sample(
    const WorkflowNet& net, std::size_t max_len,
    std::size_t max_count = std::numeric_limits<std::size_t>::max());

}  // namespace wnd
