#include "wn2declare/pnml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <optional>
#include <set>
#include <sstream>

namespace wnd {

namespace {

namespace pt = boost::property_tree;

std::string require_attr(const pt::ptree& node, const std::string& name,
                         const std::string& what) {
  auto val = node.get_optional<std::string>("<xmlattr>." + name);
  if (!val || val->empty())
    throw PnmlError(what + " element without " + name + " attribute");
  return *val;
}

std::optional<std::string> text_of(const pt::ptree& node) {
  // <name><text>label</text></name>; some writers put the label directly in
  // the element body, accept that as a fallback.
  if (auto t = node.get_child_optional("text")) return t->data();
  if (!node.data().empty()) return node.data();
  return std::nullopt;
}

struct Collector {
  std::vector<std::string> places, transitions;
  std::vector<Arc> arcs;
  std::map<std::string, std::string> names;
  std::set<std::string> ids;

  void claim_id(const std::string& id, const std::string& what) {
    if (!ids.insert(id).second)
      throw PnmlError("duplicate id in " + what + ": " + id);
  }

  void element(const std::string& tag, const pt::ptree& node) {
    if (tag == "page") {
      collect(node);
    } else if (tag == "place") {
      auto id = require_attr(node, "id", "place");
      claim_id(id, "place");
      places.push_back(id);
    } else if (tag == "transition") {
      auto id = require_attr(node, "id", "transition");
      claim_id(id, "transition");
      transitions.push_back(id);
      if (auto name = node.get_child_optional("name"))
        if (auto label = text_of(*name)) names[id] = *label;
    } else if (tag == "arc") {
      auto id = require_attr(node, "id", "arc");
      claim_id(id, "arc");
      auto source = require_attr(node, "source", "arc");
      auto target = require_attr(node, "target", "arc");
      if (auto insc = node.get_child_optional("inscription")) {
        auto w = text_of(*insc);
        if (w && *w != "1")
          throw PnmlError("arc " + id + " has unsupported weight " + *w);
      }
      for (const char* type_tag : {"type", "arctype"}) {
        if (auto type = node.get_child_optional(type_tag)) {
          auto v = type->get_optional<std::string>("<xmlattr>.value");
          std::string kind = v ? *v : text_of(*type).value_or("");
          if (!kind.empty() && kind != "normal")
            throw PnmlError("arc " + id + " has unsupported type " + kind);
        }
      }
      arcs.emplace_back(source, target);
    }
    // Everything else (name, graphics, toolspecific, ...) is ignored.
  }

  void collect(const pt::ptree& node) {
    for (const auto& [tag, child] : node)
      if (tag != "<xmlattr>" && tag != "<xmlcomment>") element(tag, child);
  }
};

}  // namespace

WorkflowNet parse_pnml(const std::string& bytes) {
  pt::ptree doc;
  std::istringstream in(bytes);
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw PnmlError(std::string("malformed XML: ") + e.what());
  }

  auto root = doc.get_child_optional("pnml");
  if (!root) throw PnmlError("missing <pnml> root element");

  Collector c;
  std::size_t nets = 0;
  for (const auto& [tag, child] : *root) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag != "net") throw PnmlError("unexpected element under <pnml>: " + tag);
    ++nets;
    c.collect(child);
  }
  if (nets != 1)
    throw PnmlError("expected exactly one <net>, found " + std::to_string(nets));

  WorkflowNet net;
  try {
    net = make_net(std::move(c.places), std::move(c.transitions), std::move(c.arcs));
  } catch (const NetError& e) {
    throw PnmlError(e.what());
  }
  net.display_names = std::move(c.names);
  return net;
}

}  // namespace wnd
