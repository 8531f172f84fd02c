#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace wnd {

// Finite-trace linear temporal logic with past operators.  Next and Yesterday
// are strict: X f is false at the last instant, Y f is false at the first.
enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,        // X
  Yesterday,   // Y
  Until,       // U
  Since,       // S
  Eventually,  // F, sugar for true U f
  Always,      // G, sugar for !F!f
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string atom;   // Op::Atom only
  FormulaPtr lhs;     // unary operand / left operand
  FormulaPtr rhs;     // right operand of binary operators
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(std::string name);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_next(FormulaPtr f);
FormulaPtr f_yesterday(FormulaPtr f);
FormulaPtr f_until(FormulaPtr a, FormulaPtr b);
FormulaPtr f_since(FormulaPtr a, FormulaPtr b);
FormulaPtr f_eventually(FormulaPtr f);
FormulaPtr f_always(FormulaPtr f);

// Disjunction of atoms in the given order; empty input yields false.
FormulaPtr f_any_of(const std::vector<std::string>& atoms);

using Trace = std::vector<std::string>;

// Satisfaction at instant i (1-based, 1 <= i <= |trace|).  Tabulates every
// subformula across all instants, so a full evaluation costs O(|f| * |trace|).
bool eval(const FormulaPtr& f, const Trace& trace, std::size_t i);

// Whole-trace satisfaction: eval at instant 1, with the empty trace handled
// structurally (Always holds, Eventually/atoms/Next/Yesterday/Until/Since do
// not, and the connectives compose).
bool satisfies(const FormulaPtr& f, const Trace& trace);

std::size_t formula_size(const FormulaPtr& f);  // node count

// ASCII rendering: G, F, X, Y applied as functions, U and S infix,
// !, &, |, -> for the connectives.
std::string to_string(const FormulaPtr& f);

}  // namespace wnd
