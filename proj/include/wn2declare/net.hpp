#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wnd {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Arc = std::pair<std::string, std::string>;

// Place/transition net with a unique source place (empty preset), a unique
// sink place (empty postset), and every node connected to both.  All node ids
// are opaque strings ordered lexicographically; arcs are ordered pairs of ids.
struct WorkflowNet {
  std::vector<std::string> places;       // sorted, unique
  std::vector<std::string> transitions;  // sorted, unique
  std::vector<Arc> arcs;                 // sorted, unique, (source id, target id)
  std::string source;
  std::string sink;
  std::map<std::string, std::string> display_names;  // transition id -> label

  bool is_place(const std::string& id) const;
  bool is_transition(const std::string& id) const;
  bool has_arc(const std::string& from, const std::string& to) const;
  std::vector<std::string> preset(const std::string& id) const;
  std::vector<std::string> postset(const std::string& id) const;
};

// Pre/post adjacency for every node, built in one pass over the arcs.
struct NetIndex {
  std::map<std::string, std::vector<std::string>> pre;
  std::map<std::string, std::vector<std::string>> post;
};
NetIndex build_index(const WorkflowNet& net);

// Returns human-readable violations of the structural conditions; empty means
// the components form a well-formed workflow net.
std::vector<std::string> validate_structure(const std::vector<std::string>& places,
                                            const std::vector<std::string>& transitions,
                                            const std::vector<Arc>& arcs);

// Sorts, deduplicates nothing (duplicates are violations), infers source and
// sink, and throws NetError listing every violation when the structure is bad.
WorkflowNet make_net(std::vector<std::string> places,
                     std::vector<std::string> transitions,
                     std::vector<Arc> arcs);

// No structural checks beyond id resolution; source/sink are taken as given.
// Exists so that deliberately broken nets can still be explored and diagnosed.
WorkflowNet make_net_unchecked(std::vector<std::string> places,
                               std::vector<std::string> transitions,
                               std::vector<Arc> arcs,
                               std::string source,
                               std::string sink);

// Only places with a positive count are present.
using Marking = std::map<std::string, int>;

Marking initial_marking(const WorkflowNet& net);
bool is_final(const WorkflowNet& net, const Marking& m);
std::string marking_to_string(const Marking& m);

std::vector<std::string> enabled(const WorkflowNet& net, const Marking& m);
bool is_enabled(const WorkflowNet& net, const Marking& m, const std::string& t);

// Throws NetError when t is unknown or not enabled at m.
Marking fire(const WorkflowNet& net, const Marking& m, const std::string& t);

struct ReplayResult {
  bool ok = false;
  std::size_t failed_at = 0;  // index of the offending transition when !ok
  Marking marking;            // reached marking (last good one on failure)
};

// Failure is a value: the first transition that is unknown or not enabled
// stops the replay.
ReplayResult replay(const WorkflowNet& net, const std::vector<std::string>& seq);

std::string to_pnml(const WorkflowNet& net, const std::string& net_id = "net1");

}  // namespace wnd
