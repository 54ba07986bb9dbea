#include <functional>

#include "hyll/transform.hpp"

namespace hyll {

namespace {

struct Mapper {
  std::function<Formula(const Formula&)> formula;
  std::function<WorldExpr(const WorldExpr&)> world;
  std::function<Term(const Term&)> term;

  Judgement operator()(const Judgement& j) const { return Judgement{formula(j.formula), world(j.world)}; }

  void apply(Derivation& d) const {
    for (auto& j : d.conclusion.gamma) j = (*this)(j);
    for (auto& j : d.conclusion.delta) j = (*this)(j);
    d.conclusion.goal = (*this)(d.conclusion.goal);
    if (d.cut) d.cut = (*this)(*d.cut);
    if (auto* t = std::get_if<Term>(&d.witness)) d.witness = term(*t);
    if (auto* w = std::get_if<WorldExpr>(&d.witness)) d.witness = world(*w);
    for (auto& p : d.premises) apply(p);
  }
};

Mapper renamer(const std::string& from, const std::string& to, bool world) {
  Mapper m;
  if (world) {
    WorldVar v = WorldVar::free(from);
    WorldExpr r = WorldExpr::free(to);
    m.formula = [=](const Formula& f) { return substitute_world(f, v, r); };
    m.world = [=](const WorldExpr& w) { return w.substitute(v, r); };
    m.term = [](const Term& t) { return t; };
  } else {
    Term r = Term::var(to);
    m.formula = [=](const Formula& f) { return substitute_term(f, TermKind::Var, from, r); };
    m.world = [](const WorldExpr& w) { return w; };
    m.term = [=](const Term& t) { return t.substitute(TermKind::Var, from, r); };
  }
  return m;
}

void rename_fresh_fields(Derivation& d, const std::string& from, const std::string& to) {
  if (d.fresh == from) d.fresh = to;
  for (auto& p : d.premises) rename_fresh_fields(p, from, to);
}

// Binder kind of the eigenvariable introduced at d, if any.
std::optional<bool> eigen_is_world(const Derivation& d) {
  if (d.rule == Rule::ForallR) return is_world_binder(d.conclusion.goal.formula.conn());
  if (d.rule == Rule::ExistsL && d.principal >= 0 && d.principal < static_cast<int>(d.conclusion.delta.size()))
    return is_world_binder(d.conclusion.delta[d.principal].formula.conn());
  return std::nullopt;
}

void collect_all(const Derivation& d, FreeNames& out) {
  collect_names(d.conclusion, out);
  if (!d.fresh.empty()) {
    out.world_free.insert(d.fresh);
    out.term_vars.insert(d.fresh);
  }
  for (const auto& p : d.premises) collect_all(p, out);
}

std::string fresh_against(const std::string& base, const FreeNames& a, const FreeNames& b) {
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!a.world_free.count(c) && !a.term_vars.count(c) && !b.world_free.count(c) && !b.term_vars.count(c)) return c;
  }
}

// Renames every eigenvariable introduced in d whose name is in the clash set.
void avoid_eigen_clashes(Derivation& d, const FreeNames& clash, FreeNames& used) {
  if (auto world = eigen_is_world(d)) {
    const auto& pool = *world ? clash.world_free : clash.term_vars;
    if (pool.count(d.fresh) && !d.premises.empty()) {
      std::string to = fresh_against(d.fresh, clash, used);
      used.world_free.insert(to);
      used.term_vars.insert(to);
      renamer(d.fresh, to, *world).apply(d.premises[0]);
      rename_fresh_fields(d.premises[0], d.fresh, to);
      d.fresh = to;
    }
  }
  for (auto& p : d.premises) avoid_eigen_clashes(p, clash, used);
}

void append_gamma(Derivation& d, const std::vector<Judgement>& extra) {
  d.conclusion.gamma.insert(d.conclusion.gamma.end(), extra.begin(), extra.end());
  for (auto& p : d.premises) append_gamma(p, extra);
}

void drop_last(Derivation& d, const Judgement& j) {
  auto& g = d.conclusion.gamma;
  int first = -1, last = -1;
  for (int i = 0; i < static_cast<int>(g.size()); ++i) {
    if (g[i] == j) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0 || first == last) throw Error(ErrorKind::NotDuplicated, "judgement is not duplicated in gamma");
  g.erase(g.begin() + last);
  if (d.rule == Rule::Copy) {
    if (d.principal == last)
      d.principal = first;
    else if (d.principal > last)
      --d.principal;
  }
  for (auto& p : d.premises) drop_last(p, j);
}

}  // namespace

Derivation rename_free(const Derivation& d, const std::string& from, const std::string& to, bool world) {
  Derivation out = d;
  renamer(from, to, world).apply(out);
  rename_fresh_fields(out, from, to);
  return out;
}

Derivation weaken(const Derivation& d, const std::vector<Judgement>& extra) {
  if (extra.empty()) return d;
  Derivation out = d;
  FreeNames clash, used;
  for (const auto& j : extra) collect_names(j, clash);
  collect_all(d, used);
  avoid_eigen_clashes(out, clash, used);
  append_gamma(out, extra);
  return out;
}

Derivation contract(const Derivation& d, const Judgement& j) {
  Derivation out = d;
  drop_last(out, j);
  return out;
}

Derivation relocate(const Derivation& d, const WorldExpr& u) {
  if (!u.is_ground()) throw Error(ErrorKind::NotGround, "relocation amount must be ground");
  if (u.is_iota()) return d;
  const Sequent& s = d.conclusion;

  std::vector<WorldExpr> anchored;
  for (const auto& j : s.delta) anchored.push_back(j.world);
  anchored.push_back(s.goal.world);

  FreeNames outside;
  for (const auto& j : s.gamma) collect_names(j, outside);
  for (const auto& j : s.delta) collect_names(j.formula, outside);
  collect_names(s.goal.formula, outside);

  for (const auto& [v, count] : s.goal.world.vars()) {
    if (v.kind != VarKind::Free || count != 1 || outside.world_free.count(v.name)) continue;
    WorldExpr shifted = compose(WorldExpr::var(v), u);
    bool ok = true;
    for (const auto& w : anchored)
      if (w.substitute(v, shifted) != compose(w, u)) ok = false;
    if (!ok) continue;

    Derivation out = d;
    // Eigenvariables named like the anchor would be captured by the shift.
    FreeNames clash, used;
    clash.world_free.insert(v.name);
    collect_all(d, used);
    avoid_eigen_clashes(out, clash, used);
    Mapper m;
    m.formula = [&](const Formula& f) { return substitute_world(f, v, shifted); };
    m.world = [&](const WorldExpr& w) { return w.substitute(v, shifted); };
    m.term = [](const Term& t) { return t; };
    m.apply(out);
    return out;
  }
  throw Error(ErrorKind::RelocationUnsupported,
              "no anchor world variable shared by every linear hypothesis and the goal");
}

}  // namespace hyll
