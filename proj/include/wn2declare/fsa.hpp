#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wnd {

struct FsaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic finite automaton over an explicit, sorted alphabet.  The
// transition table is dense; -1 marks a missing transition, and a missing
// transition rejects the rest of the word.
struct Fsa {
  std::vector<std::string> alphabet;     // sorted, unique
  std::vector<std::string> state_names;  // display only, same size as accepting
  int initial = 0;
  std::vector<char> accepting;
  std::vector<int> delta;  // num_states() * alphabet.size()

  std::size_t num_states() const { return accepting.size(); }
  int symbol_index(const std::string& s) const;  // -1 when absent
  int next(int state, int symbol) const { return delta[state * alphabet.size() + symbol]; }
  void set_edge(int state, int symbol, int to) { delta[state * alphabet.size() + symbol] = to; }
};

// n states with default names, no edges, nothing accepting.
Fsa make_fsa(std::vector<std::string> alphabet, std::size_t n);

// Single accepting state looping on every symbol: accepts every word.
Fsa universal_fsa(std::vector<std::string> alphabet);

// Single non-accepting state without edges: accepts nothing.  Also the
// canonical result of trimming an empty-language automaton.
Fsa empty_fsa(std::vector<std::string> alphabet);

bool is_complete(const Fsa& f);

// Throws FsaError on symbols outside the alphabet.
bool accepts(const Fsa& f, const std::vector<std::string>& word);

// Synchronous product on reachable state pairs; accepting iff both accept.
// Requires identical alphabets.  Operand incompleteness carries over: a pair
// has an edge only where both operands do.
Fsa product(const Fsa& a, const Fsa& b);

// Keeps states that are reachable from the initial state and co-reachable
// from an accepting state, preserving names.  An empty language yields the
// canonical single-state automaton.
Fsa trim(const Fsa& f);

// Adds a non-accepting sink for missing transitions (copy when already
// complete).
Fsa complete(const Fsa& f);

// Minimal complete automaton for the same language (Hopcroft partition
// refinement over the reachable part of the completed automaton).
Fsa minimize(const Fsa& f);

// Breadth-first renumbering of the reachable part; isomorphic automata have
// identical canonical forms modulo state names.
Fsa canonical_form(const Fsa& f);
bool isomorphic(const Fsa& a, const Fsa& b);

struct EquivResult {
  bool equivalent = false;
  std::vector<std::string> witness;  // shortest word accepted by exactly one side
};

// Language equivalence of completed automata via union-find refinement; the
// witness is extracted by breadth-first search only when distinguished.
// Requires identical alphabets.
EquivResult equivalent(const Fsa& a, const Fsa& b);

// Graphviz export: accepting states double-circled, parallel edges grouped,
// dense groups abbreviated as complements of the alphabet.
std::string to_dot(const Fsa& f, const std::string& graph_name = "fsa");

// Declare template automata; parameters must be non-empty subsets of the
// alphabet.  All three are complete by construction.
Fsa atmostone_fsa(const std::vector<std::string>& alphabet,
                  const std::vector<std::string>& a_set);
Fsa end_fsa(const std::vector<std::string>& alphabet,
            const std::vector<std::string>& a_set);
Fsa altprec_fsa(const std::vector<std::string>& alphabet,
                const std::vector<std::string>& y_set,
                const std::vector<std::string>& x_set);

}  // namespace wnd
