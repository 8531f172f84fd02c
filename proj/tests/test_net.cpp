#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "support.hpp"
#include "wn2declare/net.hpp"

using namespace wnd;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  return std::any_of(violations.begin(), violations.end(), [&](const std::string& v) {
    return v.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("well-formed order net passes every structural check") {
  WorkflowNet net = support::order_net();
  CHECK(net.places.size() == 10);
  CHECK(net.transitions.size() == 10);
  CHECK(net.arcs.size() == 22);
  CHECK(net.source == "p0");
  CHECK(net.sink == "p9");
  CHECK(std::is_sorted(net.places.begin(), net.places.end()));
  CHECK(std::is_sorted(net.transitions.begin(), net.transitions.end()));
  CHECK(std::is_sorted(net.arcs.begin(), net.arcs.end()));
}

TEST_CASE("node kind and arc lookups") {
  WorkflowNet net = support::order_net();
  CHECK(net.is_place("p3"));
  CHECK_FALSE(net.is_place("t_a"));
  CHECK(net.is_transition("t_u"));
  CHECK_FALSE(net.is_transition("p0"));
  CHECK_FALSE(net.is_place("nope"));
  CHECK(net.has_arc("p0", "t_a"));
  CHECK(net.has_arc("t_w", "p1"));
  CHECK_FALSE(net.has_arc("t_a", "p0"));
}

TEST_CASE("presets and postsets come back sorted") {
  WorkflowNet net = support::order_net();
  CHECK(net.preset("p3") == std::vector<std::string>{"t_c", "t_d"});
  CHECK(net.postset("p8") == std::vector<std::string>{"t_v", "t_w"});
  CHECK(net.preset("t_u") == std::vector<std::string>{"p6", "p7"});
  CHECK(net.postset("t_e") == std::vector<std::string>{"p4", "p5"});
  CHECK(net.preset("p0").empty());
  CHECK(net.postset("p9").empty());
  CHECK(net.preset("p1") == std::vector<std::string>{"t_a", "t_w"});
}

TEST_CASE("build_index matches preset/postset for every node") {
  WorkflowNet net = support::order_net();
  NetIndex idx = build_index(net);
  for (const auto& p : net.places) {
    CHECK(idx.pre[p] == net.preset(p));
    CHECK(idx.post[p] == net.postset(p));
  }
  for (const auto& t : net.transitions) {
    CHECK(idx.pre[t] == net.preset(t));
    CHECK(idx.post[t] == net.postset(t));
  }
}

TEST_CASE("validate_structure reports each specific violation") {
  SUBCASE("duplicate ids") {
    auto v = validate_structure({"p", "p"}, {"t"}, {{"p", "t"}});
    CHECK(mentions(v, "duplicate"));
  }
  SUBCASE("id used as both place and transition") {
    auto v = validate_structure({"a", "z"}, {"a"}, {{"z", "a"}, {"a", "z"}});
    CHECK(!v.empty());
  }
  SUBCASE("arc endpoint that is not a node") {
    auto v = validate_structure({"p", "q"}, {"t"}, {{"p", "t"}, {"t", "ghost"}});
    CHECK(mentions(v, "ghost"));
  }
  SUBCASE("place-to-place arc") {
    auto v = validate_structure({"p", "q"}, {"t"}, {{"p", "q"}, {"p", "t"}, {"t", "q"}});
    CHECK(!v.empty());
  }
  SUBCASE("transition-to-transition arc") {
    auto v = validate_structure({"p", "q"}, {"s", "t"},
                                {{"p", "s"}, {"s", "t"}, {"s", "q"}, {"p", "t"}, {"t", "q"}});
    CHECK(!v.empty());
  }
  SUBCASE("no source place") {
    auto v = validate_structure({"p", "q"}, {"s", "t"},
                                {{"p", "t"}, {"t", "q"}, {"q", "s"}, {"s", "p"}});
    CHECK(mentions(v, "source"));
  }
  SUBCASE("two source places") {
    auto v = validate_structure({"p1", "p2", "q"}, {"t"}, {{"p1", "t"}, {"p2", "t"}, {"t", "q"}});
    CHECK(mentions(v, "source"));
  }
  SUBCASE("two sink places") {
    auto v = validate_structure({"p", "q1", "q2"}, {"t"}, {{"p", "t"}, {"t", "q1"}, {"t", "q2"}});
    CHECK(mentions(v, "sink"));
  }
  SUBCASE("disconnected node") {
    auto v = validate_structure({"p", "q", "island"}, {"t", "t2"},
                                {{"p", "t"}, {"t", "q"}, {"island", "t2"}, {"t2", "island"}});
    CHECK(mentions(v, "island"));
  }
}

TEST_CASE("source and sink candidacy is judged on places only") {
  // A transition that consumes without producing is structurally legal; it
  // must not be mistaken for a sink, and the net still validates.
  auto v = validate_structure({"p_in", "p_out"}, {"t", "t_drop"},
                              {{"p_in", "t"}, {"p_in", "t_drop"}, {"t", "p_out"}});
  CHECK(v.empty());
  WorkflowNet net = make_net({"p_in", "p_out"}, {"t", "t_drop"},
                             {{"p_in", "t"}, {"p_in", "t_drop"}, {"t", "p_out"}});
  CHECK(net.source == "p_in");
  CHECK(net.sink == "p_out");
  CHECK(net.postset("t_drop").empty());
}

TEST_CASE("make_net throws a NetError listing every violation at once") {
  try {
    make_net({"p", "p", "q"}, {"t"}, {{"p", "t"}, {"t", "ghost"}});
    FAIL("expected NetError");
  } catch (const NetError& e) {
    std::string msg = e.what();
    CHECK(support::contains(msg, "duplicate"));
    CHECK(support::contains(msg, "ghost"));
  }
}

TEST_CASE("make_net_unchecked keeps whatever it is given") {
  WorkflowNet net = make_net_unchecked({"a", "b"}, {"t"}, {{"a", "t"}}, "a", "b");
  CHECK(net.source == "a");
  CHECK(net.sink == "b");
  CHECK(net.arcs.size() == 1);
}

TEST_CASE("initial and final markings") {
  WorkflowNet net = support::order_net();
  Marking m0 = initial_marking(net);
  CHECK(m0 == Marking{{"p0", 1}});
  CHECK_FALSE(is_final(net, m0));
  CHECK(is_final(net, Marking{{"p9", 1}}));
  CHECK_FALSE(is_final(net, Marking{{"p9", 2}}));
  CHECK_FALSE(is_final(net, Marking{{"p8", 1}, {"p9", 1}}));
}

TEST_CASE("marking rendering is sorted and annotates multiplicities") {
  CHECK(marking_to_string(Marking{{"p0", 1}}) == "{p0}");
  CHECK(marking_to_string(Marking{{"p9", 1}, {"p10", 1}}) == "{p10, p9}");
  CHECK(marking_to_string(Marking{{"p3", 2}, {"p1", 1}}) == "{p1, p3:2}");
  CHECK(marking_to_string(Marking{}) == "{}");
}

TEST_CASE("enabledness and firing") {
  WorkflowNet net = support::order_net();
  CHECK(enabled(net, initial_marking(net)) == std::vector<std::string>{"t_a"});
  CHECK(enabled(net, Marking{{"p4", 1}, {"p5", 1}}) == std::vector<std::string>{"t_f", "t_g"});
  CHECK(enabled(net, Marking{{"p2", 1}}) == std::vector<std::string>{"t_c", "t_d"});
  CHECK(is_enabled(net, Marking{{"p6", 1}, {"p7", 1}}, "t_u"));
  CHECK_FALSE(is_enabled(net, Marking{{"p6", 1}}, "t_u"));

  Marking m1 = fire(net, initial_marking(net), "t_a");
  CHECK(m1 == Marking{{"p1", 1}});
  Marking join = fire(net, Marking{{"p6", 1}, {"p7", 1}}, "t_u");
  CHECK(join == Marking{{"p8", 1}});

  CHECK_THROWS_AS(fire(net, initial_marking(net), "t_b"), NetError);
  CHECK_THROWS_AS(fire(net, initial_marking(net), "t_zz"), NetError);
}

TEST_CASE("firing accumulates tokens instead of capping them") {
  // p1 gains a second token when t_w fires while p1 is already marked.
  WorkflowNet net = support::order_net();
  Marking m = fire(net, Marking{{"p1", 1}, {"p8", 1}}, "t_w");
  CHECK(m == Marking{{"p1", 2}});
}

TEST_CASE("replay of a complete run reaches the final marking") {
  WorkflowNet net = support::order_net();
  ReplayResult r =
      replay(net, {"t_a", "t_b", "t_c", "t_e", "t_f", "t_g", "t_u", "t_v"});
  CHECK(r.ok);
  CHECK(r.marking == Marking{{"p9", 1}});
  CHECK(is_final(net, r.marking));
}

TEST_CASE("replay reports the first offending transition") {
  WorkflowNet net = support::order_net();
  SUBCASE("disabled at the start") {
    ReplayResult r = replay(net, {"t_b"});
    CHECK_FALSE(r.ok);
    CHECK(r.failed_at == 0);
    CHECK(r.marking == initial_marking(net));
  }
  SUBCASE("disabled mid-run") {
    ReplayResult r = replay(net, {"t_a", "t_b", "t_c", "t_f"});
    CHECK_FALSE(r.ok);
    CHECK(r.failed_at == 3);
    CHECK(r.marking == Marking{{"p3", 1}});
  }
  SUBCASE("unknown transition") {
    ReplayResult r = replay(net, {"t_a", "bogus"});
    CHECK_FALSE(r.ok);
    CHECK(r.failed_at == 1);
  }
  SUBCASE("empty sequence stays at the initial marking") {
    ReplayResult r = replay(net, {});
    CHECK(r.ok);
    CHECK(r.marking == initial_marking(net));
  }
}

TEST_CASE("concurrent branch permits both interleavings") {
  WorkflowNet net = support::order_net();
  CHECK(replay(net, {"t_a", "t_b", "t_d", "t_e", "t_f", "t_g", "t_u", "t_v"}).ok);
  CHECK(replay(net, {"t_a", "t_b", "t_d", "t_e", "t_g", "t_f", "t_u", "t_v"}).ok);
}

TEST_CASE("loop through t_w returns control to p1") {
  WorkflowNet net = support::order_net();
  ReplayResult r = replay(net, {"t_a", "t_b", "t_c", "t_e", "t_f", "t_g", "t_u", "t_w",
                                "t_b", "t_d", "t_e", "t_g", "t_f", "t_u", "t_v"});
  CHECK(r.ok);
  CHECK(is_final(net, r.marking));
}
