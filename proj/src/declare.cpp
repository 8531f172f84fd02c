#include "wn2declare/declare.hpp"

#include "wn2declare/state_space.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

namespace wnd {

namespace {

std::vector<std::string> sorted_set(std::vector<std::string> v, const char* what) {
  std::sort(v.begin(), v.end());
  auto dup = std::adjacent_find(v.begin(), v.end());
  if (dup != v.end()) throw SpecError(std::string(what) + " repeats symbol " + *dup);
  if (v.empty()) throw SpecError(std::string(what) + " must not be empty");
  return v;
}

std::string render_set(const std::vector<std::string>& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += set[i];
  }
  return out + "}";
}

std::size_t arity(Template t) { return t == Template::AlternatePrecedence ? 2 : 1; }

}  // namespace

std::string template_name(Template t) {
  switch (t) {
    case Template::AtMostOne: return "AtMostOne";
    case Template::End: return "End";
    case Template::AlternatePrecedence: return "AlternatePrecedence";
  }
  return {};
}

Constraint at_most_one(std::vector<std::string> a) {
  return {Template::AtMostOne, {sorted_set(std::move(a), "AtMostOne parameter")}};
}

Constraint end(std::vector<std::string> a) {
  return {Template::End, {sorted_set(std::move(a), "End parameter")}};
}

Constraint alternate_precedence(std::vector<std::string> y, std::vector<std::string> x) {
  return {Template::AlternatePrecedence,
          {sorted_set(std::move(y), "AlternatePrecedence activation parameter"),
           sorted_set(std::move(x), "AlternatePrecedence target parameter")}};
}

std::size_t literal_count(const DeclareSpec& spec) {
  std::size_t n = 0;
  for (const auto& c : spec.constraints)
    for (const auto& p : c.params) n += p.size();
  return n;
}

FormulaPtr constraint_formula(const Constraint& c) {
  switch (c.tmpl) {
    case Template::AtMostOne: {
      auto x = [&] { return f_any_of(c.params[0]); };
      // G(x -> !X(F(x)))
      return f_always(f_implies(x(), f_not(f_next(f_eventually(x())))));
    }
    case Template::End:
      // G(F(x))
      return f_always(f_eventually(f_any_of(c.params[0])));
    case Template::AlternatePrecedence: {
      auto y = [&] { return f_any_of(c.params[0]); };
      auto x = [&] { return f_any_of(c.params[1]); };
      // G(x -> Y(!x S y))
      return f_always(f_implies(x(), f_yesterday(f_since(f_not(x()), y()))));
    }
  }
  throw SpecError("unknown template");
}

FormulaPtr spec_formula(const DeclareSpec& spec) {
  if (spec.constraints.empty()) return f_true();
  FormulaPtr f = constraint_formula(spec.constraints[0]);
  for (std::size_t i = 1; i < spec.constraints.size(); ++i)
    f = f_and(std::move(f), constraint_formula(spec.constraints[i]));
  return f;
}

Fsa constraint_fsa(const Constraint& c, const std::vector<std::string>& alphabet) {
  switch (c.tmpl) {
    case Template::AtMostOne: return atmostone_fsa(alphabet, c.params[0]);
    case Template::End: return end_fsa(alphabet, c.params[0]);
    case Template::AlternatePrecedence:
      return altprec_fsa(alphabet, c.params[0], c.params[1]);
  }
  throw SpecError("unknown template");
}

Fsa spec_fsa(const DeclareSpec& spec) {
  return spec_fsa_bounded(spec, std::numeric_limits<std::size_t>::max());
}

Fsa spec_fsa_bounded(const DeclareSpec& spec, std::size_t max_states) {
  if (spec.constraints.empty()) return universal_fsa(spec.alphabet);

  const std::size_t nc = spec.constraints.size();
  const int k = static_cast<int>(spec.alphabet.size());
  std::vector<Fsa> parts;
  parts.reserve(nc);
  for (const auto& c : spec.constraints) parts.push_back(constraint_fsa(c, spec.alphabet));

  // Per component, mark states with no path to an accepting state.  A tuple
  // with such a component accepts nothing, so all those tuples collapse into
  // one shared sink instead of being expanded.
  std::vector<std::vector<char>> dead(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const Fsa& f = parts[c];
    const int n = f.num_states();
    std::vector<std::vector<int>> rev(n);
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < k; ++a) {
        int t = f.delta[static_cast<std::size_t>(s) * k + a];
        if (t >= 0) rev[t].push_back(s);
      }
    std::vector<char> alive(n, 0);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s)
      if (f.accepting[s]) {
        alive[s] = 1;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int p : rev[s])
        if (!alive[p]) {
          alive[p] = 1;
          stack.push_back(p);
        }
    }
    dead[c].assign(n, 0);
    for (int s = 0; s < n; ++s) dead[c][s] = !alive[s];
  }

  auto is_dead = [&](const std::vector<int>& tuple) {
    for (std::size_t c = 0; c < nc; ++c)
      if (dead[c][tuple[c]]) return true;
    return false;
  };

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> tuples;
  std::vector<char> accepting;
  std::vector<int> delta;
  int sink = -1;  // lazily created shared dead state

  auto intern = [&](std::vector<int> tuple) {
    auto [it, fresh] = index.emplace(std::move(tuple), static_cast<int>(tuples.size()));
    if (fresh) {
      if (tuples.size() >= max_states)
        throw BoundError("specification product exceeds " + std::to_string(max_states) +
                         " states");
      tuples.push_back(it->first);
      bool acc = true;
      for (std::size_t c = 0; c < nc; ++c)
        if (!parts[c].accepting[it->first[c]]) acc = false;
      accepting.push_back(acc ? 1 : 0);
    }
    return it->second;
  };

  std::vector<int> start(nc);
  for (std::size_t c = 0; c < nc; ++c) start[c] = parts[c].initial;
  if (is_dead(start)) {
    // The specification accepts nothing at all.
    return empty_fsa(spec.alphabet);
  }
  intern(start);

  for (std::size_t s = 0; s < tuples.size(); ++s) {
    delta.resize((s + 1) * k, -1);
    if (static_cast<int>(s) == sink) {
      for (int a = 0; a < k; ++a) delta[s * k + a] = sink;  // loops on every symbol
      continue;
    }
    const std::vector<int> cur = tuples[s];  // copy: tuples grows below
    std::vector<int> next(nc);
    for (int a = 0; a < k; ++a) {
      for (std::size_t c = 0; c < nc; ++c)
        next[c] = parts[c].delta[static_cast<std::size_t>(cur[c]) * k + a];
      int target;
      if (is_dead(next)) {
        if (sink < 0) {
          if (tuples.size() >= max_states)
            throw BoundError("specification product exceeds " + std::to_string(max_states) +
                             " states");
          sink = static_cast<int>(tuples.size());
          tuples.emplace_back();  // no tuple payload; never expanded
          accepting.push_back(0);
        }
        target = sink;
      } else {
        target = intern(next);
      }
      delta[s * k + a] = target;
    }
  }

  Fsa out;
  out.alphabet = spec.alphabet;
  out.initial = 0;
  out.accepting = std::move(accepting);
  out.delta = std::move(delta);
  out.delta.resize(tuples.size() * k, -1);
  out.state_names.reserve(tuples.size());
  for (std::size_t s = 0; s < tuples.size(); ++s) out.state_names.push_back("q" + std::to_string(s));
  return trim(out);
}

std::string constraint_to_string(const Constraint& c) {
  std::string out = template_name(c.tmpl) + "(";
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    if (i) out += ",";
    out += render_set(c.params[i]);
  }
  return out + ")";
}

std::string to_text(const DeclareSpec& spec) {
  std::string out;
  for (const auto& c : spec.constraints) out += constraint_to_string(c) + "\n";
  return out;
}

std::string to_json(const DeclareSpec& spec) {
  nlohmann::ordered_json j;
  j["alphabet"] = spec.alphabet;
  j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : spec.constraints) {
    nlohmann::ordered_json jc;
    jc["template"] = template_name(c.tmpl);
    jc["params"] = c.params;
    j["constraints"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

namespace {

Template template_by_name(const std::string& name) {
  if (name == "AtMostOne") return Template::AtMostOne;
  if (name == "End") return Template::End;
  if (name == "AlternatePrecedence") return Template::AlternatePrecedence;
  throw SpecError("unknown template: " + name);
}

Constraint make_constraint(Template t, std::vector<std::vector<std::string>> params,
                           const std::string& where) {
  if (params.size() != arity(t))
    throw SpecError(where + ": " + template_name(t) + " takes " +
                    std::to_string(arity(t)) + " parameter set(s), got " +
                    std::to_string(params.size()));
  switch (t) {
    case Template::AtMostOne: return at_most_one(std::move(params[0]));
    case Template::End: return end(std::move(params[0]));
    case Template::AlternatePrecedence:
      return alternate_precedence(std::move(params[0]), std::move(params[1]));
  }
  throw SpecError("unknown template");
}

// TemplateName({a,b},{c}) with optional whitespace around tokens.
Constraint parse_constraint_line(const std::string& line, std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= line.size() || line[i] != c)
      throw SpecError(where + ": expected '" + std::string(1, c) + "'");
    ++i;
  };

  skip_ws();
  std::size_t start = i;
  while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
    ++i;
  Template t = template_by_name(line.substr(start, i - start));

  expect('(');
  std::vector<std::vector<std::string>> params;
  while (true) {
    expect('{');
    std::vector<std::string> set;
    while (true) {
      skip_ws();
      std::size_t s = i;
      while (i < line.size() && line[i] != ',' && line[i] != '}' && line[i] != ' ' &&
             line[i] != '\t')
        ++i;
      if (i > s) set.push_back(line.substr(s, i - s));
      skip_ws();
      if (i < line.size() && line[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    expect('}');
    params.push_back(std::move(set));
    skip_ws();
    if (i < line.size() && line[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  expect(')');
  skip_ws();
  if (i != line.size()) throw SpecError(where + ": trailing characters");
  return make_constraint(t, std::move(params), where);
}

}  // namespace

DeclareSpec parse_spec_text(const std::string& bytes) {
  DeclareSpec spec;
  std::set<std::string> symbols;
  std::size_t lineno = 0, start = 0;
  while (start <= bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    std::string line = bytes.substr(start, nl == std::string::npos ? nl : nl - start);
    start = nl == std::string::npos ? bytes.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t ws = line.find_first_not_of(" \t");
    if (ws == std::string::npos) continue;
    if (line[ws] == '#') continue;
    spec.constraints.push_back(parse_constraint_line(line, lineno));
    for (const auto& p : spec.constraints.back().params)
      symbols.insert(p.begin(), p.end());
  }
  spec.alphabet.assign(symbols.begin(), symbols.end());
  return spec;
}

DeclareSpec parse_spec_json(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("constraints"))
    throw SpecError("specification JSON needs \"alphabet\" and \"constraints\"");

  DeclareSpec spec;
  try {
    spec.alphabet = j["alphabet"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError("\"alphabet\" must be an array of strings");
  }
  std::sort(spec.alphabet.begin(), spec.alphabet.end());
  spec.alphabet.erase(std::unique(spec.alphabet.begin(), spec.alphabet.end()),
                      spec.alphabet.end());

  if (!j["constraints"].is_array())
    throw SpecError("\"constraints\" must be an array");
  std::size_t n = 0;
  for (const auto& jc : j["constraints"]) {
    const std::string where = "constraint " + std::to_string(n++);
    if (!jc.is_object() || !jc.contains("template") || !jc.contains("params"))
      throw SpecError(where + " needs \"template\" and \"params\"");
    Template t = template_by_name(jc["template"].get<std::string>());
    std::vector<std::vector<std::string>> params;
    try {
      params = jc["params"].get<std::vector<std::vector<std::string>>>();
    } catch (const nlohmann::json::exception&) {
      throw SpecError(where + ": \"params\" must be an array of symbol arrays");
    }
    auto c = make_constraint(t, std::move(params), where);
    for (const auto& p : c.params)
      for (const auto& s : p)
        if (!std::binary_search(spec.alphabet.begin(), spec.alphabet.end(), s))
          throw SpecError(where + ": symbol outside alphabet: " + s);
    spec.constraints.push_back(std::move(c));
  }
  return spec;
}

}  // namespace wnd
