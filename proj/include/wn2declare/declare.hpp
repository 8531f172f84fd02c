#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wn2declare/fsa.hpp"
#include "wn2declare/ltlf.hpp"

namespace wnd {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Template { AtMostOne, End, AlternatePrecedence };

std::string template_name(Template t);

// Branched constraint: every parameter is a non-empty set of symbols, kept
// sorted.  AtMostOne and End take one parameter, AlternatePrecedence two
// (activations, then targets).
struct Constraint {
  Template tmpl;
  std::vector<std::vector<std::string>> params;

  bool operator==(const Constraint&) const = default;
};

Constraint at_most_one(std::vector<std::string> a);
Constraint end(std::vector<std::string> a);
Constraint alternate_precedence(std::vector<std::string> y, std::vector<std::string> x);

struct DeclareSpec {
  std::vector<std::string> alphabet;  // sorted, unique
  std::vector<Constraint> constraints;

  bool operator==(const DeclareSpec&) const = default;
};

// Total symbol occurrences across all parameter sets.
std::size_t literal_count(const DeclareSpec& spec);

FormulaPtr constraint_formula(const Constraint& c);
FormulaPtr spec_formula(const DeclareSpec& spec);  // conjunction in order

Fsa constraint_fsa(const Constraint& c, const std::vector<std::string>& alphabet);

// Product of the constraint automata folded in declaration order, trimmed
// after every step.  No constraints yields the universal automaton.
Fsa spec_fsa(const DeclareSpec& spec);

// Same automaton with a cap on the number of product states materialized;
// throws BoundError beyond the cap.  Tuples containing a constraint state
// that can never accept again are collapsed into one shared sink, which keeps
// the construction near the size of the specification's actual behavior.
Fsa spec_fsa_bounded(const DeclareSpec& spec, std::size_t max_states);

// One constraint per line, e.g. "AlternatePrecedence({t_u},{t_v,t_w})".
std::string constraint_to_string(const Constraint& c);
std::string to_text(const DeclareSpec& spec);
std::string to_json(const DeclareSpec& spec);

// Text parsing takes the alphabet as the union of the parameter sets; JSON
// carries it explicitly.
DeclareSpec parse_spec_text(const std::string& bytes);
DeclareSpec parse_spec_json(const std::string& bytes);

}  // namespace wnd
