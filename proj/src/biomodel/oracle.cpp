#include <deque>
#include <set>

#include "hyll/biomodel.hpp"
#include "hyll/parser.hpp"

namespace hyll {

namespace {

int index_of(const std::vector<std::string>& vars, const std::string& x) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == x) return static_cast<int>(i);
  throw Error(ErrorKind::Oracle, "unknown entity '" + x + "'");
}

bool holds(const std::vector<std::string>& vars, BoolState s, const std::string& x, bool present) {
  return (((s >> index_of(vars, x)) & 1u) != 0) == present;
}

BoolState assign(const std::vector<std::string>& vars, BoolState s, const std::string& x, bool present) {
  BoolState bit = BoolState(1) << index_of(vars, x);
  return present ? (s | bit) : (s & ~bit);
}

// Literal list such as "!p53 Mdm2", or "p53 & !Mdm2".
std::vector<Literal> literals(const std::string& text, const std::vector<std::string>& vars) {
  TokenStream ts(tokenize(text));
  std::vector<Literal> out;
  std::set<std::string> seen;
  while (!ts.at_end()) {
    if (ts.accept(",") || ts.accept("&") || ts.accept("*")) continue;
    bool neg = ts.accept("!");
    const Token& t = ts.peek();
    if (t.kind != TokKind::Ident) ts.fail({"entity"}, "expected an entity");
    index_of(vars, t.text);
    if (!seen.insert(t.text).second) throw Error(ErrorKind::Oracle, "'" + t.text + "' given twice");
    out.push_back({t.text, !neg});
    ts.next();
  }
  return out;
}

}  // namespace

bool rule_enabled(const BioRule& r, const std::vector<std::string>& vars, BoolState s) {
  bool a_pres = r.effect != Effect::StrongEffect;
  bool b_pres = (r.polarity == Polarity::Activation) == a_pres;
  if (!holds(vars, s, r.a, a_pres)) return false;
  switch (r.strength) {
    case Strength::Weak:
    case Strength::General: return true;
    case Strength::Strong: return holds(vars, s, r.b, !b_pres);
    case Strength::Loop: return holds(vars, s, r.b, b_pres);
  }
  return false;
}

BoolState rule_apply(const BioRule& r, const std::vector<std::string>& vars, BoolState s) {
  bool a_pres = r.effect != Effect::StrongEffect;
  bool b_pres = (r.polarity == Polarity::Activation) == a_pres;
  s = assign(vars, s, r.a, r.effect == Effect::Consume ? false : a_pres);
  return assign(vars, s, r.b, b_pres);
}

TransitionSystem oracle_transitions(const BioModel& m) {
  validate_model(m);
  if (m.vars.size() > 20) throw Error(ErrorKind::Model, "oracle handles at most 20 variables");
  TransitionSystem ts;
  ts.vars = m.vars;
  ts.edges.resize(std::size_t(1) << m.vars.size());
  for (BoolState s = 0; s < ts.edges.size(); ++s)
    for (std::size_t i = 0; i < m.rules.size(); ++i)
      if (rule_enabled(m.rules[i], m.vars, s))
        ts.edges[s].push_back({static_cast<int>(i + 1), rule_apply(m.rules[i], m.vars, s)});
  return ts;
}

BoolState parse_state(const std::string& text, const std::vector<std::string>& vars) {
  auto ls = literals(text, vars);
  if (ls.size() != vars.size()) throw Error(ErrorKind::Oracle, "state must give every entity a value");
  BoolState s = 0;
  for (const auto& l : ls) s = assign(vars, s, l.var, l.present);
  return s;
}

std::function<bool(BoolState)> parse_state_predicate(const std::string& text, const std::vector<std::string>& vars) {
  auto ls = literals(text, vars);
  return [ls, vars](BoolState s) {
    for (const auto& l : ls)
      if (!holds(vars, s, l.var, l.present)) return false;
    return true;
  };
}

std::string state_to_string(BoolState s, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += " ";
    out += ((s >> i) & 1u) ? vars[i] : "!" + vars[i];
  }
  return out;
}

std::optional<std::vector<int>> oracle_reach(const TransitionSystem& ts, BoolState from,
                                             const std::function<bool(BoolState)>& to, int bound) {
  if (from >= ts.state_count()) throw Error(ErrorKind::Oracle, "state out of range");
  struct Visit {
    BoolState parent;
    int rule;
    int depth;
  };
  std::vector<std::optional<Visit>> seen(ts.state_count());
  seen[from] = Visit{from, 0, 0};
  std::deque<BoolState> queue{from};
  while (!queue.empty()) {
    BoolState s = queue.front();
    queue.pop_front();
    if (to(s)) {
      std::vector<int> path;
      for (BoolState c = s; c != from; c = seen[c]->parent)
        path.insert(path.begin(), seen[c]->rule);
      return path;
    }
    if (seen[s]->depth >= bound) continue;
    for (const Edge& e : ts.edges[s]) {
      if (seen[e.to]) continue;
      seen[e.to] = Visit{s, e.rule, seen[s]->depth + 1};
      queue.push_back(e.to);
    }
  }
  return std::nullopt;
}

std::optional<BoolState> follow_path(const TransitionSystem& ts, BoolState from, const std::vector<int>& rules) {
  BoolState s = from;
  for (int r : rules) {
    bool moved = false;
    for (const Edge& e : ts.edges.at(s))
      if (e.rule == r) {
        s = e.to;
        moved = true;
        break;
      }
    if (!moved) return std::nullopt;
  }
  return s;
}

bool is_fixpoint(const TransitionSystem& ts, BoolState s) {
  for (const Edge& e : ts.edges.at(s))
    if (e.to != s) return false;
  return true;
}

}  // namespace hyll
