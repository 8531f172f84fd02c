#include <doctest.h>

#include <string>

#include "support.hpp"
#include "wn2declare/net.hpp"
#include "wn2declare/pnml.hpp"

using namespace wnd;

namespace {

// Minimal two-place document the error tests mutate; first_arc replaces the
// whole first <arc> element when given.
std::string tiny(const std::string& extra_body = "", const std::string& first_arc = "") {
  std::string a1 = first_arc.empty() ? "<arc id=\"a1\" source=\"p_in\" target=\"t1\"/>\n"
                                     : first_arc + "\n";
  return "<?xml version=\"1.0\"?>\n"
         "<pnml><net id=\"n1\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
         "<place id=\"p_in\"><initialMarking><text>1</text></initialMarking></place>\n"
         "<place id=\"p_out\"/>\n"
         "<transition id=\"t1\"><name><text>step one</text></name></transition>\n" +
         a1 + "<arc id=\"a2\" source=\"t1\" target=\"p_out\"/>\n" + extra_body +
         "</net></pnml>\n";
}

std::string arc1(const std::string& inner) {
  return "<arc id=\"a1\" source=\"p_in\" target=\"t1\">" + inner + "</arc>";
}

}  // namespace

TEST_CASE("order fixture parses to the expected net") {
  WorkflowNet net = parse_pnml(support::read_file(support::fixture("order.pnml")));
  WorkflowNet built = support::order_net();
  CHECK(net.places == built.places);
  CHECK(net.transitions == built.transitions);
  CHECK(net.arcs == built.arcs);
  CHECK(net.source == "p0");
  CHECK(net.sink == "p9");
}

TEST_CASE("transition labels are kept as display names") {
  WorkflowNet net = parse_pnml(support::read_file(support::fixture("order.pnml")));
  CHECK(net.display_names.at("t_a") == "receive order");
  CHECK(net.display_names.at("t_v") == "ship and archive");
  CHECK(net.display_names.at("t_w") == "request rework");
  CHECK(net.display_names.size() == 10);
}

TEST_CASE("graphics, toolspecific and page wrappers are tolerated") {
  // The fixture exercises all three; parsing it at all is the assertion, but
  // double-check a page-wrapped document built here too.
  std::string doc =
      "<pnml><net id=\"n\"><page id=\"pg1\">"
      "<place id=\"s\"><graphics><position x=\"1\" y=\"2\"/></graphics></place>"
      "<page id=\"pg2\"><transition id=\"t\"><toolspecific tool=\"x\" version=\"1\"/>"
      "</transition><place id=\"e\"/></page>"
      "<arc id=\"a\" source=\"s\" target=\"t\"/><arc id=\"b\" source=\"t\" target=\"e\"/>"
      "</page></net></pnml>";
  WorkflowNet net = parse_pnml(doc);
  CHECK(net.places == std::vector<std::string>{"e", "s"});
  CHECK(net.source == "s");
  CHECK(net.sink == "e");
}

TEST_CASE("unit arc inscriptions pass, other weights are rejected") {
  CHECK_NOTHROW(parse_pnml(tiny("", arc1("<inscription><text>1</text></inscription>"))));
  CHECK_THROWS_WITH_AS(
      (void)parse_pnml(tiny("", arc1("<inscription><text>2</text></inscription>"))),
      doctest::Contains("unsupported weight"), PnmlError);
}

TEST_CASE("non-normal arc types are rejected") {
  CHECK_THROWS_WITH_AS((void)parse_pnml(tiny("", arc1("<type value=\"inhibitor\"/>"))),
                       doctest::Contains("unsupported type"), PnmlError);
  CHECK_NOTHROW(parse_pnml(tiny("", arc1("<type value=\"normal\"/>"))));
}

TEST_CASE("malformed XML is a PnmlError") {
  CHECK_THROWS_WITH_AS((void)parse_pnml("<pnml><net id=\"n\">"),
                       doctest::Contains("malformed XML"), PnmlError);
  CHECK_THROWS_WITH_AS((void)parse_pnml("just text"), doctest::Contains("malformed"),
                       PnmlError);
}

TEST_CASE("document structure errors") {
  SUBCASE("missing pnml root") {
    CHECK_THROWS_WITH_AS((void)parse_pnml("<notpnml/>"), doctest::Contains("pnml"),
                         PnmlError);
  }
  SUBCASE("zero nets") {
    CHECK_THROWS_WITH_AS((void)parse_pnml("<pnml></pnml>"),
                         doctest::Contains("exactly one"), PnmlError);
  }
  SUBCASE("two nets") {
    CHECK_THROWS_WITH_AS(
        (void)parse_pnml("<pnml><net id=\"a\"/><net id=\"b\"/></pnml>"),
        doctest::Contains("exactly one"), PnmlError);
  }
  SUBCASE("stray element under the root") {
    CHECK_THROWS_WITH_AS(
        (void)parse_pnml("<pnml><bogus/><net id=\"a\"/></pnml>"),
        doctest::Contains("unexpected element"), PnmlError);
  }
}

TEST_CASE("duplicate and missing ids") {
  CHECK_THROWS_WITH_AS((void)parse_pnml(tiny("<place id=\"p_in\"/>")),
                       doctest::Contains("duplicate id"), PnmlError);
  CHECK_THROWS_WITH_AS(
      (void)parse_pnml("<pnml><net id=\"n\"><place/></net></pnml>"),
      doctest::Contains("without id"), PnmlError);
  CHECK_THROWS_WITH_AS(
      (void)parse_pnml(tiny("<arc id=\"a3\" target=\"t1\"/>")),
      doctest::Contains("without source"), PnmlError);
}

TEST_CASE("structural violations surface through PnmlError") {
  // Arc to an undeclared node: caught by net validation after collection.
  CHECK_THROWS_WITH_AS((void)parse_pnml(tiny("<arc id=\"a3\" source=\"t1\" target=\"ghost\"/>")),
                       doctest::Contains("ghost"), PnmlError);
}

TEST_CASE("pnml writer round-trips through the parser") {
  WorkflowNet net = support::order_net();
  net.display_names["t_a"] = "receive order";
  WorkflowNet back = parse_pnml(to_pnml(net));
  CHECK(back.places == net.places);
  CHECK(back.transitions == net.transitions);
  CHECK(back.arcs == net.arcs);
  CHECK(back.source == net.source);
  CHECK(back.sink == net.sink);
  CHECK(back.display_names.at("t_a") == "receive order");
}

TEST_CASE("mutant fixtures parse (they are structurally fine, only behaviorally broken)") {
  for (const char* name : {"mutant_deadlock.pnml", "mutant_improper.pnml",
                           "mutant_dead_transition.pnml", "mutant_unsafe.pnml"}) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_pnml(support::read_file(support::fixture(name))));
  }
}
