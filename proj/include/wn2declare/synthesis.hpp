#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wn2declare/declare.hpp"
#include "wn2declare/net.hpp"
#include "wn2declare/state_space.hpp"

namespace wnd {

// One constraint per place, over the alphabet of all transitions: internal
// places yield AlternatePrecedence(preset, postset), the source AtMostOne of
// its postset, the sink End of its preset.  Purely structural, linear in the
// size of the net.
DeclareSpec synthesize(const WorkflowNet& net);

struct VerifyResult {
  bool equivalent = false;
  std::vector<std::string> witness;  // accepted by exactly one side
  std::size_t reachability_states = 0;
  std::size_t specification_states = 0;
};

// Compares the net's reachability automaton with the synthesized
// specification's product automaton.  Propagates UnsafeError/BoundError from
// exploration.
VerifyResult verify_equivalence(const WorkflowNet& net, std::size_t max_states = 1'000'000);

}  // namespace wnd
