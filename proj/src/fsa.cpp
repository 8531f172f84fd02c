#include "wn2declare/fsa.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

namespace wnd {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_subset(const std::vector<std::string>& alphabet,
                  const std::vector<std::string>& set, const char* what) {
  if (set.empty()) throw FsaError(std::string(what) + " parameter set is empty");
  for (const auto& s : set)
    if (!std::binary_search(alphabet.begin(), alphabet.end(), s))
      throw FsaError(std::string(what) + " parameter outside alphabet: " + s);
}

std::vector<char> membership(const Fsa& f, const std::vector<std::string>& set) {
  std::vector<char> in(f.alphabet.size(), 0);
  for (const auto& s : set) in[f.symbol_index(s)] = 1;
  return in;
}

std::vector<int> reachable_order(const Fsa& f) {
  std::vector<int> order;
  std::vector<char> seen(f.num_states(), 0);
  std::queue<int> q;
  seen[f.initial] = 1;
  q.push(f.initial);
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    order.push_back(s);
    for (std::size_t a = 0; a < f.alphabet.size(); ++a) {
      int t = f.next(s, a);
      if (t >= 0 && !seen[t]) {
        seen[t] = 1;
        q.push(t);
      }
    }
  }
  return order;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

int Fsa::symbol_index(const std::string& s) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
  if (it == alphabet.end() || *it != s) return -1;
  return static_cast<int>(it - alphabet.begin());
}

Fsa make_fsa(std::vector<std::string> alphabet, std::size_t n) {
  Fsa f;
  f.alphabet = sorted_unique(std::move(alphabet));
  f.accepting.assign(n, 0);
  f.delta.assign(n * f.alphabet.size(), -1);
  f.state_names.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.state_names[i] = "s" + std::to_string(i);
  return f;
}

Fsa universal_fsa(std::vector<std::string> alphabet) {
  Fsa f = make_fsa(std::move(alphabet), 1);
  f.accepting[0] = 1;
  for (std::size_t a = 0; a < f.alphabet.size(); ++a) f.set_edge(0, a, 0);
  return f;
}

Fsa empty_fsa(std::vector<std::string> alphabet) {
  return make_fsa(std::move(alphabet), 1);
}

bool is_complete(const Fsa& f) {
  return std::find(f.delta.begin(), f.delta.end(), -1) == f.delta.end();
}

bool accepts(const Fsa& f, const std::vector<std::string>& word) {
  int s = f.initial;
  for (const auto& sym : word) {
    int a = f.symbol_index(sym);
    if (a < 0) throw FsaError("symbol outside alphabet: " + sym);
    s = f.next(s, a);
    if (s < 0) return false;
  }
  return f.accepting[s];
}

Fsa product(const Fsa& a, const Fsa& b) {
  if (a.alphabet != b.alphabet)
    throw FsaError("product requires identical alphabets");
  const std::size_t k = a.alphabet.size();

  std::unordered_map<std::uint64_t, int> id;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int x, int y) {
    std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y);
    auto [it, fresh] = id.emplace(key, static_cast<int>(pairs.size()));
    if (fresh) pairs.emplace_back(x, y);
    return it->second;
  };

  std::vector<std::tuple<int, std::size_t, int>> edges;
  intern(a.initial, b.initial);
  for (std::size_t s = 0; s < pairs.size(); ++s) {  // pairs grows during the scan
    for (std::size_t sym = 0; sym < k; ++sym) {
      auto [x, y] = pairs[s];
      int nx = a.next(x, sym), ny = b.next(y, sym);
      if (nx < 0 || ny < 0) continue;
      edges.emplace_back(static_cast<int>(s), sym, intern(nx, ny));
    }
  }

  Fsa out;
  out.alphabet = a.alphabet;
  out.initial = 0;
  out.accepting.resize(pairs.size());
  out.state_names.resize(pairs.size());
  out.delta.assign(pairs.size() * k, -1);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.accepting[i] = a.accepting[pairs[i].first] && b.accepting[pairs[i].second];
    out.state_names[i] = a.state_names[pairs[i].first] + "," + b.state_names[pairs[i].second];
  }
  for (const auto& [s, sym, t] : edges) out.delta[s * k + sym] = t;
  return out;
}

Fsa trim(const Fsa& f) {
  const std::size_t n = f.num_states(), k = f.alphabet.size();

  std::vector<char> fwd(n, 0);
  std::queue<int> q;
  fwd[f.initial] = 1;
  q.push(f.initial);
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (std::size_t a = 0; a < k; ++a) {
      int t = f.next(s, a);
      if (t >= 0 && !fwd[t]) {
        fwd[t] = 1;
        q.push(t);
      }
    }
  }

  std::vector<std::vector<int>> rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < k; ++a) {
      int t = f.next(s, a);
      if (t >= 0) rev[t].push_back(static_cast<int>(s));
    }
  std::vector<char> bwd(n, 0);
  for (std::size_t s = 0; s < n; ++s)
    if (f.accepting[s]) {
      bwd[s] = 1;
      q.push(static_cast<int>(s));
    }
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (int t : rev[s])
      if (!bwd[t]) {
        bwd[t] = 1;
        q.push(t);
      }
  }

  std::vector<int> remap(n, -1);
  std::size_t kept = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (fwd[s] && bwd[s]) remap[s] = static_cast<int>(kept++);

  if (remap[f.initial] < 0) return empty_fsa(f.alphabet);

  Fsa out;
  out.alphabet = f.alphabet;
  out.initial = remap[f.initial];
  out.accepting.assign(kept, 0);
  out.state_names.resize(kept);
  out.delta.assign(kept * k, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    out.accepting[remap[s]] = f.accepting[s];
    out.state_names[remap[s]] = f.state_names[s];
    for (std::size_t a = 0; a < k; ++a) {
      int t = f.next(s, a);
      if (t >= 0 && remap[t] >= 0) out.delta[remap[s] * k + a] = remap[t];
    }
  }
  return out;
}

Fsa complete(const Fsa& f) {
  if (is_complete(f)) return f;
  Fsa out = f;
  const std::size_t k = f.alphabet.size();
  int sink = static_cast<int>(out.num_states());
  out.accepting.push_back(0);
  out.state_names.push_back("sink");
  out.delta.resize((sink + 1) * k, -1);
  for (auto& d : out.delta)
    if (d < 0) d = sink;
  return out;
}

Fsa minimize(const Fsa& f) {
  Fsa c = complete(f);
  auto order = reachable_order(c);
  const std::size_t k = c.alphabet.size();
  const std::size_t n = order.size();

  // restrict to reachable states, renumbered in BFS order
  std::vector<int> remap(c.num_states(), -1);
  for (std::size_t i = 0; i < n; ++i) remap[order[i]] = static_cast<int>(i);
  std::vector<int> delta(n * k);
  std::vector<char> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = c.accepting[order[i]];
    for (std::size_t a = 0; a < k; ++a) delta[i * k + a] = remap[c.next(order[i], a)];
  }

  // Hopcroft refinement; the new block created by a split is always the
  // smaller half, so it is the one (re)enqueued.
  std::vector<std::vector<int>> rev(n * k);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < k; ++a)
      rev[delta[s * k + a] * k + a].push_back(static_cast<int>(s));

  std::vector<int> block_of(n, 0);
  std::vector<std::vector<int>> blocks;
  {
    std::vector<int> accs, rejs;
    for (std::size_t s = 0; s < n; ++s) (acc[s] ? accs : rejs).push_back(static_cast<int>(s));
    if (!rejs.empty()) blocks.push_back(std::move(rejs));
    if (!accs.empty()) blocks.push_back(std::move(accs));
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int s : blocks[b]) block_of[s] = static_cast<int>(b);
  }

  std::set<std::pair<int, int>> work;  // (block, symbol)
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t a = 0; a < k; ++a) work.insert({static_cast<int>(b), static_cast<int>(a)});

  std::vector<std::vector<int>> touched(blocks.size());

  while (!work.empty()) {
    auto [bi, a] = *work.begin();
    work.erase(work.begin());
    std::vector<int> splitter = blocks[bi];  // copy: splits below may edit blocks[bi]

    std::vector<int> dirty;
    for (int t : splitter)
      for (int s : rev[t * k + a]) {
        int b = block_of[s];
        if (touched[b].empty()) dirty.push_back(b);
        touched[b].push_back(s);
      }

    for (int b : dirty) {
      if (touched[b].size() < blocks[b].size()) {
        int nb = static_cast<int>(blocks.size());
        std::vector<int> in = std::move(touched[b]);
        touched[b] = {};
        std::sort(in.begin(), in.end());
        std::vector<int> rest;
        std::set_difference(blocks[b].begin(), blocks[b].end(), in.begin(), in.end(),
                            std::back_inserter(rest));
        if (in.size() > rest.size()) std::swap(in, rest);
        blocks[b] = std::move(rest);           // larger part keeps the index
        blocks.push_back(std::move(in));       // smaller part becomes nb
        for (int s : blocks[nb]) block_of[s] = nb;
        touched.emplace_back();
        for (std::size_t sym = 0; sym < k; ++sym)
          work.insert({nb, static_cast<int>(sym)});
      } else {
        touched[b].clear();
      }
    }
  }

  // quotient automaton, renumbered by BFS from the initial block
  std::vector<int> canon(blocks.size(), -1);
  std::vector<int> bfs;
  canon[block_of[0]] = 0;  // state 0 is the initial state after the restriction
  bfs.push_back(block_of[0]);
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int rep = blocks[bfs[i]][0];
    for (std::size_t a = 0; a < k; ++a) {
      int tb = block_of[delta[rep * k + a]];
      if (canon[tb] < 0) {
        canon[tb] = static_cast<int>(bfs.size());
        bfs.push_back(tb);
      }
    }
  }

  Fsa out = make_fsa(c.alphabet, bfs.size());
  out.initial = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int rep = blocks[bfs[i]][0];
    out.accepting[i] = acc[rep];
    for (std::size_t a = 0; a < k; ++a)
      out.set_edge(static_cast<int>(i), static_cast<int>(a), canon[block_of[delta[rep * k + a]]]);
  }
  return out;
}

Fsa canonical_form(const Fsa& f) {
  auto order = reachable_order(f);
  const std::size_t k = f.alphabet.size();
  std::vector<int> remap(f.num_states(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i);

  Fsa out = make_fsa(f.alphabet, order.size());
  out.initial = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.accepting[i] = f.accepting[order[i]];
    out.state_names[i] = "q" + std::to_string(i);
    for (std::size_t a = 0; a < k; ++a) {
      int t = f.next(order[i], a);
      if (t >= 0) out.set_edge(static_cast<int>(i), static_cast<int>(a), remap[t]);
    }
  }
  return out;
}

bool isomorphic(const Fsa& a, const Fsa& b) {
  Fsa ca = canonical_form(a), cb = canonical_form(b);
  return ca.alphabet == cb.alphabet && ca.accepting == cb.accepting && ca.delta == cb.delta;
}

EquivResult equivalent(const Fsa& a_in, const Fsa& b_in) {
  if (a_in.alphabet != b_in.alphabet)
    throw FsaError("equivalence requires identical alphabets");
  Fsa a = complete(a_in), b = complete(b_in);
  const std::size_t k = a.alphabet.size();
  const int na = static_cast<int>(a.num_states());
  const std::size_t total = a.num_states() + b.num_states();

  std::vector<int> parent(total), rank(total, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto acc = [&](int x) { return x < na ? a.accepting[x] : b.accepting[x - na]; };
  auto succ = [&](int x, std::size_t sym) {
    return x < na ? a.next(x, sym) : b.next(x - na, sym) + na;
  };

  bool distinguished = false;
  std::vector<std::pair<int, int>> stack;
  auto merge = [&](int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return;
    if (acc(x) != acc(y)) {
      distinguished = true;
      return;
    }
    if (rank[rx] < rank[ry]) std::swap(rx, ry);
    parent[ry] = rx;
    if (rank[rx] == rank[ry]) ++rank[rx];
    stack.emplace_back(x, y);
  };

  merge(a.initial, na + b.initial);
  while (!stack.empty() && !distinguished) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (std::size_t sym = 0; sym < k && !distinguished; ++sym)
      merge(succ(x, sym), succ(y, sym));
  }

  EquivResult r;
  r.equivalent = !distinguished;
  if (distinguished) {
    // shortest distinguishing word by BFS over the pair graph
    auto key = [](int x, int y) {
      return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y);
    };
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> from;
    std::deque<std::pair<int, int>> q;
    q.emplace_back(a.initial, b.initial);
    from[key(a.initial, b.initial)] = {0, -1};
    while (!q.empty()) {
      auto [x, y] = q.front();
      q.pop_front();
      if (a.accepting[x] != b.accepting[y]) {
        std::vector<std::string> w;
        std::uint64_t cur = key(x, y);
        while (true) {
          auto [prev, sym] = from[cur];
          if (sym < 0) break;
          w.push_back(a.alphabet[sym]);
          cur = prev;
        }
        std::reverse(w.begin(), w.end());
        r.witness = std::move(w);
        break;
      }
      for (std::size_t sym = 0; sym < k; ++sym) {
        int nx = a.next(x, sym), ny = b.next(y, sym);
        auto nk = key(nx, ny);
        if (!from.count(nk)) {
          from[nk] = {key(x, y), static_cast<int>(sym)};
          q.emplace_back(nx, ny);
        }
      }
    }
  }
  return r;
}

std::string to_dot(const Fsa& f, const std::string& graph_name) {
  const std::size_t k = f.alphabet.size();
  auto name_of = [&](std::size_t s) {
    return f.state_names[s].empty() ? "s" + std::to_string(s) : f.state_names[s];
  };

  std::string out = "digraph " + quote(graph_name) + " {\n  rankdir=LR;\n";
  out += "  __init [shape=point, label=\"\"];\n";
  for (std::size_t s = 0; s < f.num_states(); ++s)
    out += "  " + quote(name_of(s)) + " [shape=" +
           (f.accepting[s] ? "doublecircle" : "circle") + "];\n";
  out += "  __init -> " + quote(name_of(f.initial)) + ";\n";

  for (std::size_t s = 0; s < f.num_states(); ++s) {
    std::map<int, std::vector<std::string>> grouped;  // target -> symbols
    for (std::size_t a = 0; a < k; ++a) {
      int t = f.next(s, a);
      if (t >= 0) grouped[t].push_back(f.alphabet[a]);
    }
    for (const auto& [t, syms] : grouped) {
      std::string label;
      if (syms.size() == k) {
        label = "\xce\xa3";  // Σ
      } else if (syms.size() > k / 2 && k > 3) {
        std::vector<std::string> rest;
        std::set_difference(f.alphabet.begin(), f.alphabet.end(), syms.begin(), syms.end(),
                            std::back_inserter(rest));
        label = "\xce\xa3\xe2\x88\x96{";  // Σ∖
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (i) label += ",";
          label += rest[i];
        }
        label += "}";
      } else {
        for (std::size_t i = 0; i < syms.size(); ++i) {
          if (i) label += ",";
          label += syms[i];
        }
      }
      out += "  " + quote(name_of(s)) + " -> " + quote(name_of(t)) + " [label=" + quote(label) +
             "];\n";
    }
  }
  out += "}\n";
  return out;
}

Fsa atmostone_fsa(const std::vector<std::string>& alphabet,
                  const std::vector<std::string>& a_set) {
  Fsa f = make_fsa(alphabet, 3);
  check_subset(f.alphabet, a_set, "AtMostOne");
  auto in = membership(f, a_set);
  f.accepting = {1, 1, 0};
  for (std::size_t a = 0; a < f.alphabet.size(); ++a) {
    f.set_edge(0, a, in[a] ? 1 : 0);
    f.set_edge(1, a, in[a] ? 2 : 1);
    f.set_edge(2, a, 2);
  }
  return f;
}

Fsa end_fsa(const std::vector<std::string>& alphabet,
            const std::vector<std::string>& a_set) {
  Fsa f = make_fsa(alphabet, 2);
  check_subset(f.alphabet, a_set, "End");
  auto in = membership(f, a_set);
  f.accepting = {0, 1};
  for (std::size_t a = 0; a < f.alphabet.size(); ++a) {
    f.set_edge(0, a, in[a] ? 1 : 0);
    f.set_edge(1, a, in[a] ? 1 : 0);
  }
  return f;
}

Fsa altprec_fsa(const std::vector<std::string>& alphabet,
                const std::vector<std::string>& y_set,
                const std::vector<std::string>& x_set) {
  Fsa f = make_fsa(alphabet, 3);
  check_subset(f.alphabet, y_set, "AlternatePrecedence");
  check_subset(f.alphabet, x_set, "AlternatePrecedence");
  auto in_y = membership(f, y_set);
  auto in_x = membership(f, x_set);
  // 0 = unarmed, 1 = armed (an activation was seen and not yet consumed),
  // 2 = trap.  A target symbol in the unarmed state is an unpreceded
  // occurrence; from the armed state it consumes the activation unless the
  // symbol is itself also an activation.
  f.accepting = {1, 1, 0};
  for (std::size_t a = 0; a < f.alphabet.size(); ++a) {
    f.set_edge(0, a, in_x[a] ? 2 : (in_y[a] ? 1 : 0));
    f.set_edge(1, a, in_y[a] ? 1 : (in_x[a] ? 0 : 1));
    f.set_edge(2, a, 2);
  }
  return f;
}

}  // namespace wnd
