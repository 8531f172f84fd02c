#include "wn2declare/state_space.hpp"

#include <algorithm>
#include <unordered_map>

namespace wnd {

namespace {

// Integer-indexed view of the net for the exploration loop.
struct Compiled {
  const WorkflowNet& net;
  std::vector<std::vector<int>> consume;  // transition -> place indices taken from
  std::vector<std::vector<int>> produce;  // transition -> place indices added to
  int source = 0, sink = 0;

  explicit Compiled(const WorkflowNet& n) : net(n) {
    std::unordered_map<std::string, int> place_id, trans_id;
    for (std::size_t i = 0; i < n.places.size(); ++i) place_id[n.places[i]] = i;
    for (std::size_t i = 0; i < n.transitions.size(); ++i) trans_id[n.transitions[i]] = i;
    consume.resize(n.transitions.size());
    produce.resize(n.transitions.size());
    for (const auto& [from, to] : n.arcs) {
      auto tp = trans_id.find(to);
      if (tp != trans_id.end()) {
        consume[tp->second].push_back(place_id.at(from));
        continue;
      }
      auto tf = trans_id.find(from);
      if (tf != trans_id.end()) produce[tf->second].push_back(place_id.at(to));
    }
    source = place_id.at(n.source);
    sink = place_id.at(n.sink);
  }

  Marking to_marking(const std::string& counts) const {
    Marking m;
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i]) m[net.places[i]] = counts[i];
    return m;
  }
};

}  // namespace

StateSpace explore(const WorkflowNet& net, std::size_t max_states) {
  Compiled c(net);
  const std::size_t np = net.places.size(), nt = net.transitions.size();

  std::string initial(np, '\0');
  initial[c.source] = 1;

  std::unordered_map<std::string, int> id;
  std::vector<std::string> states;
  std::vector<int> parent, parent_label;
  std::vector<std::tuple<int, std::size_t, int>> edges;

  id.emplace(initial, 0);
  states.push_back(initial);
  parent.push_back(-1);
  parent_label.push_back(-1);

  auto path_to = [&](int s, int last_label) {
    std::vector<std::string> seq;
    seq.push_back(net.transitions[last_label]);
    for (int cur = s; parent[cur] >= 0; cur = parent[cur])
      seq.push_back(net.transitions[parent_label[cur]]);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t t = 0; t < nt; ++t) {
      bool ok = true;
      for (int p : c.consume[t])
        if (!states[s][p]) {
          ok = false;
          break;
        }
      if (!ok) continue;

      std::string next = states[s];
      for (int p : c.consume[t]) --next[p];
      for (int p : c.produce[t]) {
        if (++next[p] > 1) {
          Marking witness = c.to_marking(next);
          throw UnsafeError("net is unsafe: place " + net.places[p] +
                                " reaches two tokens at " + marking_to_string(witness),
                            std::move(witness), path_to(static_cast<int>(s), t));
        }
      }

      auto [it, fresh] = id.emplace(next, static_cast<int>(states.size()));
      if (fresh) {
        if (states.size() >= max_states)
          throw BoundError("state bound exceeded: more than " + std::to_string(max_states) +
                           " reachable markings");
        states.push_back(next);
        parent.push_back(static_cast<int>(s));
        parent_label.push_back(static_cast<int>(t));
      }
      edges.emplace_back(static_cast<int>(s), t, it->second);
    }
  }

  StateSpace ss;
  ss.markings.reserve(states.size());
  for (const auto& st : states) ss.markings.push_back(c.to_marking(st));

  std::string final_state(np, '\0');
  final_state[c.sink] = 1;

  ss.fsa.alphabet = net.transitions;
  ss.fsa.initial = 0;
  ss.fsa.accepting.assign(states.size(), 0);
  ss.fsa.state_names.resize(states.size());
  ss.fsa.delta.assign(states.size() * nt, -1);
  for (std::size_t i = 0; i < states.size(); ++i) {
    ss.fsa.accepting[i] = states[i] == final_state;
    ss.fsa.state_names[i] = marking_to_string(ss.markings[i]);
  }
  for (const auto& [from, label, to] : edges) ss.fsa.delta[from * nt + label] = to;
  return ss;
}

SoundnessReport check_soundness(const WorkflowNet& net, const StateSpace& ss) {
  SoundnessReport r;
  const std::size_t n = ss.markings.size(), nt = ss.fsa.alphabet.size();

  int final_state = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (ss.fsa.accepting[i]) final_state = static_cast<int>(i);

  std::vector<char> can_complete(n, 0);
  if (final_state >= 0) {
    std::vector<std::vector<int>> rev(n);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < nt; ++t) {
        int to = ss.fsa.next(s, t);
        if (to >= 0) rev[to].push_back(static_cast<int>(s));
      }
    std::vector<int> stack{final_state};
    can_complete[final_state] = 1;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int p : rev[s])
        if (!can_complete[p]) {
          can_complete[p] = 1;
          stack.push_back(p);
        }
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    if (!can_complete[s]) {
      r.option_to_complete = false;
      r.option_witness = ss.markings[s];
      break;
    }

  for (std::size_t s = 0; s < n; ++s) {
    auto it = ss.markings[s].find(net.sink);
    if (it != ss.markings[s].end() && it->second > 0 && !is_final(net, ss.markings[s])) {
      r.proper_completion = false;
      r.completion_witness = ss.markings[s];
      break;
    }
  }

  std::vector<char> fired(nt, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < nt; ++t)
      if (ss.fsa.next(s, t) >= 0) fired[t] = 1;
  for (std::size_t t = 0; t < nt; ++t)
    if (!fired[t]) {
      r.no_dead_transitions = false;
      r.dead.push_back(ss.fsa.alphabet[t]);
    }
  return r;
}

std::vector<std::vector<std::string>> language_sample(const WorkflowNet& net,
                                                      std::size_t max_len,
                                                      std::size_t max_count) {
  std::vector<std::vector<std::string>> runs;
  std::vector<std::string> seq;

  std::function<void(const Marking&)> dfs = [&](const Marking& m) {
    if (runs.size() >= max_count) return;
    if (is_final(net, m)) runs.push_back(seq);
    if (seq.size() >= max_len) return;
    for (const auto& t : enabled(net, m)) {
      seq.push_back(t);
      dfs(fire(net, m, t));
      seq.pop_back();
      if (runs.size() >= max_count) return;
    }
  };
  dfs(initial_marking(net));
  return runs;
}

}  // namespace wnd
