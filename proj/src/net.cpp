#include "wn2declare/net.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace wnd {

namespace {

bool contains(const std::vector<std::string>& sorted, const std::string& id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

void sort_unique_report(std::vector<std::string>& v, const char* kind,
                        std::vector<std::string>& violations) {
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1])
      violations.push_back(std::string("duplicate ") + kind + " id: " + v[i]);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

bool WorkflowNet::is_place(const std::string& id) const {
  return contains(places, id);
}

bool WorkflowNet::is_transition(const std::string& id) const {
  return contains(transitions, id);
}

bool WorkflowNet::has_arc(const std::string& from, const std::string& to) const {
  return std::binary_search(arcs.begin(), arcs.end(), Arc{from, to});
}

std::vector<std::string> WorkflowNet::preset(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [from, to] : arcs)
    if (to == id) out.push_back(from);
  return out;  // sorted because arcs are sorted by (from, to)
}

std::vector<std::string> WorkflowNet::postset(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [from, to] : arcs)
    if (from == id) out.push_back(to);
  return out;
}

NetIndex build_index(const WorkflowNet& net) {
  NetIndex idx;
  for (const auto& p : net.places) {
    idx.pre[p];
    idx.post[p];
  }
  for (const auto& t : net.transitions) {
    idx.pre[t];
    idx.post[t];
  }
  for (const auto& [from, to] : net.arcs) {
    idx.post[from].push_back(to);
    idx.pre[to].push_back(from);
  }
  return idx;  // arc order is sorted, so every adjacency list is sorted
}

std::vector<std::string> validate_structure(const std::vector<std::string>& places_in,
                                            const std::vector<std::string>& transitions_in,
                                            const std::vector<Arc>& arcs_in) {
  std::vector<std::string> violations;
  std::vector<std::string> places = places_in;
  std::vector<std::string> transitions = transitions_in;
  sort_unique_report(places, "place", violations);
  sort_unique_report(transitions, "transition", violations);

  for (const auto& p : places)
    if (contains(transitions, p))
      violations.push_back("id used as both place and transition: " + p);

  if (places.empty()) violations.push_back("net has no places");
  if (transitions.empty()) violations.push_back("net has no transitions");

  std::vector<Arc> arcs = arcs_in;
  std::sort(arcs.begin(), arcs.end());
  for (std::size_t i = 1; i < arcs.size(); ++i)
    if (arcs[i] == arcs[i - 1])
      violations.push_back("duplicate arc: (" + arcs[i].first + ", " + arcs[i].second + ")");

  std::map<std::string, int> pre_deg, post_deg;
  for (const auto& [from, to] : arcs) {
    bool fp = contains(places, from), ft = contains(transitions, from);
    bool tp = contains(places, to), tt = contains(transitions, to);
    if (!fp && !ft) violations.push_back("arc source is not a node: " + from);
    if (!tp && !tt) violations.push_back("arc target is not a node: " + to);
    if ((fp && tp) || (ft && tt))
      violations.push_back("arc joins two nodes of the same kind: (" + from + ", " + to + ")");
    ++post_deg[from];
    ++pre_deg[to];
  }

  std::vector<std::string> source_candidates, sink_candidates;
  for (const auto& p : places) {
    if (pre_deg[p] == 0) source_candidates.push_back(p);
    if (post_deg[p] == 0) sink_candidates.push_back(p);
  }
  if (source_candidates.size() != 1)
    violations.push_back(source_candidates.empty()
                             ? std::string("no source candidate (every place has a preset)")
                             : "multiple source candidates: " + join(source_candidates, ", "));
  if (sink_candidates.size() != 1)
    violations.push_back(sink_candidates.empty()
                             ? std::string("no sink candidate (every place has a postset)")
                             : "multiple sink candidates: " + join(sink_candidates, ", "));

  // Path condition: with a unique source and sink, every node must sit in
  // their connected component of the underlying undirected graph.
  if (source_candidates.size() == 1 && sink_candidates.size() == 1) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [from, to] : arcs) {
      adj[from].push_back(to);
      adj[to].push_back(from);
    }
    std::set<std::string> seen;
    std::queue<std::string> q;
    seen.insert(source_candidates[0]);
    q.push(source_candidates[0]);
    while (!q.empty()) {
      auto cur = q.front();
      q.pop();
      for (const auto& nxt : adj[cur])
        if (seen.insert(nxt).second) q.push(nxt);
    }
    if (!seen.count(sink_candidates[0]))
      violations.push_back("sink " + sink_candidates[0] + " not connected to source " +
                           source_candidates[0]);
    for (const auto& p : places)
      if (!seen.count(p))
        violations.push_back("place not on a source-sink path: " + p);
    for (const auto& t : transitions)
      if (!seen.count(t))
        violations.push_back("transition not on a source-sink path: " + t);
  }

  return violations;
}

WorkflowNet make_net(std::vector<std::string> places,
                     std::vector<std::string> transitions,
                     std::vector<Arc> arcs) {
  auto violations = validate_structure(places, transitions, arcs);
  if (!violations.empty())
    throw NetError("invalid workflow net: " + join(violations, "; "));

  WorkflowNet net;
  net.places = std::move(places);
  net.transitions = std::move(transitions);
  net.arcs = std::move(arcs);
  std::sort(net.places.begin(), net.places.end());
  std::sort(net.transitions.begin(), net.transitions.end());
  std::sort(net.arcs.begin(), net.arcs.end());

  auto idx = build_index(net);
  for (const auto& p : net.places) {
    if (idx.pre[p].empty()) net.source = p;
    if (idx.post[p].empty()) net.sink = p;
  }
  return net;
}

WorkflowNet make_net_unchecked(std::vector<std::string> places,
                               std::vector<std::string> transitions,
                               std::vector<Arc> arcs,
                               std::string source,
                               std::string sink) {
  WorkflowNet net;
  net.places = std::move(places);
  net.transitions = std::move(transitions);
  net.arcs = std::move(arcs);
  std::sort(net.places.begin(), net.places.end());
  std::sort(net.transitions.begin(), net.transitions.end());
  std::sort(net.arcs.begin(), net.arcs.end());
  net.source = std::move(source);
  net.sink = std::move(sink);
  if (!net.is_place(net.source)) throw NetError("source is not a place: " + net.source);
  if (!net.is_place(net.sink)) throw NetError("sink is not a place: " + net.sink);
  return net;
}

Marking initial_marking(const WorkflowNet& net) {
  return Marking{{net.source, 1}};
}

bool is_final(const WorkflowNet& net, const Marking& m) {
  return m.size() == 1 && m.begin()->first == net.sink && m.begin()->second == 1;
}

std::string marking_to_string(const Marking& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [p, n] : m) {
    if (!first) out += ", ";
    first = false;
    out += p;
    if (n != 1) out += ":" + std::to_string(n);
  }
  return out + "}";
}

bool is_enabled(const WorkflowNet& net, const Marking& m, const std::string& t) {
  if (!net.is_transition(t)) return false;
  for (const auto& p : net.preset(t)) {
    auto it = m.find(p);
    if (it == m.end() || it->second <= 0) return false;
  }
  return true;
}

std::vector<std::string> enabled(const WorkflowNet& net, const Marking& m) {
  std::vector<std::string> out;
  for (const auto& t : net.transitions)
    if (is_enabled(net, m, t)) out.push_back(t);
  return out;
}

Marking fire(const WorkflowNet& net, const Marking& m, const std::string& t) {
  if (!net.is_transition(t)) throw NetError("unknown transition: " + t);
  if (!is_enabled(net, m, t))
    throw NetError("transition " + t + " not enabled at " + marking_to_string(m));
  Marking out = m;
  for (const auto& p : net.preset(t)) {
    auto it = out.find(p);
    if (--it->second == 0) out.erase(it);
  }
  for (const auto& p : net.postset(t)) ++out[p];
  return out;
}

ReplayResult replay(const WorkflowNet& net, const std::vector<std::string>& seq) {
  ReplayResult r;
  r.marking = initial_marking(net);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!is_enabled(net, r.marking, seq[i])) {
      r.ok = false;
      r.failed_at = i;
      return r;
    }
    r.marking = fire(net, r.marking, seq[i]);
  }
  r.ok = true;
  return r;
}

std::string to_pnml(const WorkflowNet& net, const std::string& net_id) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<pnml>\n  <net id=\"" << xml_escape(net_id) << "\">\n";
  for (const auto& p : net.places) {
    out << "    <place id=\"" << xml_escape(p) << "\"";
    if (p == net.source)
      out << ">\n      <initialMarking><text>1</text></initialMarking>\n    </place>\n";
    else
      out << "/>\n";
  }
  for (const auto& t : net.transitions) {
    auto it = net.display_names.find(t);
    out << "    <transition id=\"" << xml_escape(t) << "\"";
    if (it != net.display_names.end())
      out << ">\n      <name><text>" << xml_escape(it->second)
          << "</text></name>\n    </transition>\n";
    else
      out << "/>\n";
  }
  std::size_t k = 0;
  for (const auto& [from, to] : net.arcs)
    out << "    <arc id=\"a" << k++ << "\" source=\"" << xml_escape(from) << "\" target=\""
        << xml_escape(to) << "\"/>\n";
  out << "  </net>\n</pnml>\n";
  return out.str();
}

}  // namespace wnd
