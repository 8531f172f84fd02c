#include "wn2declare/ltlf.hpp"

#include <stdexcept>
#include <unordered_map>

namespace wnd {

namespace {

FormulaPtr make(Op op, std::string atom, FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->atom = std::move(atom);
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

// One bit vector per subformula, indexed 0..n-1 for instants 1..n.
class Table {
 public:
  explicit Table(const Trace& trace) : trace_(trace), n_(trace.size()) {}

  const std::vector<char>& row(const FormulaPtr& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;

    std::vector<char> r(n_, 0);
    switch (f->op) {
      case Op::True:
        r.assign(n_, 1);
        break;
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t i = 0; i < n_; ++i) r[i] = trace_[i] == f->atom;
        break;
      case Op::Not: {
        const auto& a = row(f->lhs);
        for (std::size_t i = 0; i < n_; ++i) r[i] = !a[i];
        break;
      }
      case Op::And: {
        const auto& a = row(f->lhs);
        const auto& b = row(f->rhs);
        for (std::size_t i = 0; i < n_; ++i) r[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        const auto& a = row(f->lhs);
        const auto& b = row(f->rhs);
        for (std::size_t i = 0; i < n_; ++i) r[i] = a[i] || b[i];
        break;
      }
      case Op::Implies: {
        const auto& a = row(f->lhs);
        const auto& b = row(f->rhs);
        for (std::size_t i = 0; i < n_; ++i) r[i] = !a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = row(f->lhs);
        for (std::size_t i = 0; i + 1 < n_; ++i) r[i] = a[i + 1];
        break;
      }
      case Op::Yesterday: {
        const auto& a = row(f->lhs);
        for (std::size_t i = 1; i < n_; ++i) r[i] = a[i - 1];
        break;
      }
      case Op::Until: {
        const auto& a = row(f->lhs);
        const auto& b = row(f->rhs);
        char suffix = 0;
        for (std::size_t i = n_; i-- > 0;) {
          suffix = b[i] || (a[i] && suffix);
          r[i] = suffix;
        }
        break;
      }
      case Op::Since: {
        const auto& a = row(f->lhs);
        const auto& b = row(f->rhs);
        char prefix = 0;
        for (std::size_t i = 0; i < n_; ++i) {
          prefix = b[i] || (a[i] && prefix);
          r[i] = prefix;
        }
        break;
      }
      case Op::Eventually: {
        const auto& a = row(f->lhs);
        char suffix = 0;
        for (std::size_t i = n_; i-- > 0;) {
          suffix = suffix || a[i];
          r[i] = suffix;
        }
        break;
      }
      case Op::Always: {
        const auto& a = row(f->lhs);
        char suffix = 1;
        for (std::size_t i = n_; i-- > 0;) {
          suffix = suffix && a[i];
          r[i] = suffix;
        }
        break;
      }
    }
    return memo_.emplace(f.get(), std::move(r)).first->second;
  }

 private:
  const Trace& trace_;
  std::size_t n_;
  std::unordered_map<const Formula*, std::vector<char>> memo_;
};

bool vacuous(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
    case Op::Always:
      return true;
    case Op::Not:
      return !vacuous(f->lhs);
    case Op::And:
      return vacuous(f->lhs) && vacuous(f->rhs);
    case Op::Or:
      return vacuous(f->lhs) || vacuous(f->rhs);
    case Op::Implies:
      return !vacuous(f->lhs) || vacuous(f->rhs);
    default:
      // atoms and every operator that needs a witness instant
      return false;
  }
}

int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Since: return 4;
    default: return 5;
  }
}

void render(const FormulaPtr& f, std::string& out, int parent_prec) {
  int prec = precedence(f->op);
  auto binary = [&](const char* sym) {
    bool parens = prec <= parent_prec;
    if (parens) out += "(";
    render(f->lhs, out, prec);
    out += sym;
    render(f->rhs, out, prec);
    if (parens) out += ")";
  };
  switch (f->op) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom: out += f->atom; break;
    case Op::Not:
      out += "!";
      render(f->lhs, out, prec);
      break;
    case Op::And: binary(" & "); break;
    case Op::Or: binary(" | "); break;
    case Op::Implies: binary(" -> "); break;
    case Op::Until: binary(" U "); break;
    case Op::Since: binary(" S "); break;
    case Op::Next:
      out += "X(";
      render(f->lhs, out, 0);
      out += ")";
      break;
    case Op::Yesterday:
      out += "Y(";
      render(f->lhs, out, 0);
      out += ")";
      break;
    case Op::Eventually:
      out += "F(";
      render(f->lhs, out, 0);
      out += ")";
      break;
    case Op::Always:
      out += "G(";
      render(f->lhs, out, 0);
      out += ")";
      break;
  }
}

}  // namespace

FormulaPtr f_true() { return make(Op::True, {}, nullptr, nullptr); }
FormulaPtr f_false() { return make(Op::False, {}, nullptr, nullptr); }
FormulaPtr f_atom(std::string name) { return make(Op::Atom, std::move(name), nullptr, nullptr); }
FormulaPtr f_not(FormulaPtr f) { return make(Op::Not, {}, std::move(f), nullptr); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return make(Op::And, {}, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return make(Op::Or, {}, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return make(Op::Implies, {}, std::move(a), std::move(b));
}
FormulaPtr f_next(FormulaPtr f) { return make(Op::Next, {}, std::move(f), nullptr); }
FormulaPtr f_yesterday(FormulaPtr f) { return make(Op::Yesterday, {}, std::move(f), nullptr); }
FormulaPtr f_until(FormulaPtr a, FormulaPtr b) {
  return make(Op::Until, {}, std::move(a), std::move(b));
}
FormulaPtr f_since(FormulaPtr a, FormulaPtr b) {
  return make(Op::Since, {}, std::move(a), std::move(b));
}
FormulaPtr f_eventually(FormulaPtr f) { return make(Op::Eventually, {}, std::move(f), nullptr); }
FormulaPtr f_always(FormulaPtr f) { return make(Op::Always, {}, std::move(f), nullptr); }

FormulaPtr f_any_of(const std::vector<std::string>& atoms) {
  if (atoms.empty()) return f_false();
  FormulaPtr f = f_atom(atoms[0]);
  for (std::size_t i = 1; i < atoms.size(); ++i) f = f_or(std::move(f), f_atom(atoms[i]));
  return f;
}

bool eval(const FormulaPtr& f, const Trace& trace, std::size_t i) {
  if (i < 1 || i > trace.size())
    throw std::out_of_range("instant " + std::to_string(i) + " outside 1.." +
                            std::to_string(trace.size()));
  Table table(trace);
  return table.row(f)[i - 1];
}

bool satisfies(const FormulaPtr& f, const Trace& trace) {
  if (trace.empty()) return vacuous(f);
  return eval(f, trace, 1);
}

std::size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->lhs) + formula_size(f->rhs);
}

std::string to_string(const FormulaPtr& f) {
  std::string out;
  render(f, out, 0);
  return out;
}

}  // namespace wnd
