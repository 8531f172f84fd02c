#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "support.hpp"
#include "wn2declare/pnml.hpp"
#include "wn2declare/state_space.hpp"

using namespace wnd;

namespace {

std::size_t edge_count(const Fsa& f) {
  return static_cast<std::size_t>(std::count_if(f.delta.begin(), f.delta.end(),
                                                [](int d) { return d >= 0; }));
}

WorkflowNet load(const std::string& name) {
  return parse_pnml(support::read_file(support::fixture(name)));
}

}  // namespace

TEST_CASE("order net explores to 10 markings and 12 edges") {
  WorkflowNet net = support::order_net();
  StateSpace ss = explore(net);
  CHECK(ss.markings.size() == 10);
  CHECK(edge_count(ss.fsa) == 12);
  CHECK(ss.fsa.num_states() == 10);
  CHECK(ss.markings[0] == initial_marking(net));
  CHECK(ss.fsa.initial == 0);
  CHECK(ss.fsa.alphabet == net.transitions);

  // Exactly one accepting state, and it is the final marking.
  std::size_t acc = 0;
  for (std::size_t s = 0; s < ss.fsa.num_states(); ++s) {
    if (!ss.fsa.accepting[s]) continue;
    ++acc;
    CHECK(is_final(net, ss.markings[s]));
  }
  CHECK(acc == 1);
}

TEST_CASE("every explored marking is distinct") {
  StateSpace ss = explore(support::order_net());
  std::set<Marking> seen(ss.markings.begin(), ss.markings.end());
  CHECK(seen.size() == ss.markings.size());
}

TEST_CASE("reachability automaton accepts exactly the complete runs") {
  WorkflowNet net = support::order_net();
  StateSpace ss = explore(net);
  CHECK(accepts(ss.fsa, {"t_a", "t_b", "t_c", "t_e", "t_f", "t_g", "t_u", "t_v"}));
  CHECK(accepts(ss.fsa, {"t_a", "t_b", "t_d", "t_e", "t_g", "t_f", "t_u", "t_v"}));
  // One round through the rework loop.
  CHECK(accepts(ss.fsa, {"t_a", "t_b", "t_d", "t_e", "t_g", "t_f", "t_u", "t_w",
                         "t_b", "t_c", "t_e", "t_f", "t_g", "t_u", "t_v"}));
  // Proper prefixes stop short of the final marking.
  CHECK_FALSE(accepts(ss.fsa, {"t_a", "t_b", "t_c", "t_e", "t_f", "t_g", "t_u"}));
  CHECK_FALSE(accepts(ss.fsa, {}));
  // Words that are not firing sequences at all.
  CHECK_FALSE(accepts(ss.fsa, {"t_b"}));
  CHECK_FALSE(accepts(ss.fsa, {"t_a", "t_a"}));
}

TEST_CASE("state bound aborts exploration eagerly") {
  WorkflowNet net = support::order_net();
  CHECK_THROWS_AS((void)explore(net, 5), BoundError);
  CHECK_NOTHROW((void)explore(net, 10));  // exactly enough
}

TEST_CASE("unsafe net aborts with the offending marking and a producing sequence") {
  WorkflowNet net = load("mutant_unsafe.pnml");
  try {
    (void)explore(net);
    FAIL("expected UnsafeError");
  } catch (const UnsafeError& e) {
    CHECK(e.witness == Marking{{"p1", 1}, {"p3", 2}});
    CHECK(e.firing_sequence ==
          std::vector<std::string>{"t_a", "t_b", "t_c", "t_b", "t_c"});
    // The reported sequence really produces the reported marking.
    ReplayResult r = replay(net, e.firing_sequence);
    CHECK(r.ok);
    CHECK(r.marking == e.witness);
    CHECK(support::contains(e.what(), "p3"));
  }
}

TEST_CASE("soundness report for the order net is clean") {
  WorkflowNet net = support::order_net();
  StateSpace ss = explore(net);
  SoundnessReport rep = check_soundness(net, ss);
  CHECK(rep.sound());
  CHECK(rep.option_to_complete);
  CHECK(rep.proper_completion);
  CHECK(rep.no_dead_transitions);
  CHECK(rep.dead.empty());
  CHECK_FALSE(rep.option_witness.has_value());
  CHECK_FALSE(rep.completion_witness.has_value());
}

TEST_CASE("deadlocking mutant loses the option to complete") {
  WorkflowNet net = load("mutant_deadlock.pnml");
  StateSpace ss = explore(net);
  SoundnessReport rep = check_soundness(net, ss);
  CHECK_FALSE(rep.sound());
  CHECK_FALSE(rep.option_to_complete);
  REQUIRE(rep.option_witness.has_value());
  // The witness is a reachable marking that can never complete.  Here the
  // whole state space is cut off from completion, so the earliest marking in
  // breadth-first order — the initial one — is reported.
  CHECK(*rep.option_witness == initial_marking(net));
  CHECK(std::find(ss.markings.begin(), ss.markings.end(), *rep.option_witness) !=
        ss.markings.end());
  CHECK_FALSE(is_final(net, *rep.option_witness));
  CHECK(rep.proper_completion);
  // Transitions beyond the dead end can never fire.
  CHECK(rep.dead == std::vector<std::string>{"t_u", "t_v", "t_w"});
  CHECK_FALSE(rep.no_dead_transitions);
}

TEST_CASE("improper-completion mutant marks the sink alongside another token") {
  WorkflowNet net = load("mutant_improper.pnml");
  StateSpace ss = explore(net);
  SoundnessReport rep = check_soundness(net, ss);
  CHECK_FALSE(rep.sound());
  CHECK_FALSE(rep.proper_completion);
  REQUIRE(rep.completion_witness.has_value());
  CHECK(marking_to_string(*rep.completion_witness) == "{p10, p9}");
  CHECK(rep.completion_witness->count("p9") == 1);
  CHECK(rep.completion_witness->size() >= 2);
}

TEST_CASE("dead-transition mutant fails only the dead-transition condition") {
  WorkflowNet net = load("mutant_dead_transition.pnml");
  StateSpace ss = explore(net);
  SoundnessReport rep = check_soundness(net, ss);
  CHECK(rep.option_to_complete);
  CHECK(rep.proper_completion);
  CHECK_FALSE(rep.no_dead_transitions);
  CHECK(rep.dead == std::vector<std::string>{"t_x"});
  CHECK_FALSE(rep.sound());
}

TEST_CASE("language sample enumerates complete runs in lexicographic order") {
  WorkflowNet net = support::order_net();
  auto runs = language_sample(net, 8);
  // Without the loop there are exactly four runs: choice of t_c/t_d times the
  // interleaving of t_f/t_g.
  REQUIRE(runs.size() == 4);
  CHECK(runs[0] == std::vector<std::string>{"t_a", "t_b", "t_c", "t_e", "t_f", "t_g",
                                            "t_u", "t_v"});
  CHECK(std::is_sorted(runs.begin(), runs.end()));
  for (const auto& run : runs) {
    ReplayResult r = replay(net, run);
    CHECK(r.ok);
    CHECK(is_final(net, r.marking));
  }
}

TEST_CASE("language sample grows with the length bound and honors max_count") {
  WorkflowNet net = support::order_net();
  CHECK(language_sample(net, 7).empty());
  // One loop round adds seven firings: runs of length 15 appear next.
  CHECK(language_sample(net, 14).size() == 4);
  CHECK(language_sample(net, 15).size() == 4 + 16);
  CHECK(language_sample(net, 15, 6).size() == 6);
  CHECK(language_sample(net, 15, 0).empty());
}

TEST_CASE("explore handles a net whose sink is reached immediately") {
  WorkflowNet net = make_net({"a", "b"}, {"t"}, {{"a", "t"}, {"t", "b"}});
  StateSpace ss = explore(net);
  CHECK(ss.markings.size() == 2);
  CHECK(accepts(ss.fsa, {"t"}));
  CHECK_FALSE(accepts(ss.fsa, {}));
  SoundnessReport rep = check_soundness(net, ss);
  CHECK(rep.sound());
}
