#include "internal.hpp"

namespace hyll {

namespace {

[[noreturn]] void not_applicable(const std::string& msg) { throw Error(ErrorKind::RuleNotApplicable, msg); }

bool conn_in(Conn c, const std::vector<Conn>& cs) {
  for (Conn x : cs)
    if (x == c) return true;
  return false;
}

}  // namespace

class Engine {
 public:
  explicit Engine(ProofState& st) : st_(st) {}

  std::vector<int> run(int g, const Tactic& t) {
    switch (t.kind) {
      case Tactic::Kind::Skip: return {g};
      case Tactic::Kind::Prim: return primitive(g, t);
      case Tactic::Kind::Cases: return cases(g);
      case Tactic::Kind::Auto: {
        AutoOptions opt;
        opt.depth = t.depth;
        opt.using_labels = t.using_labels;
        return automatic(g, opt);
      }
      case Tactic::Kind::Then: {
        std::vector<int> out;
        for (int x : run(g, t.subs[0])) {
          auto r = run(x, t.subs[1]);
          out.insert(out.end(), r.begin(), r.end());
        }
        return out;
      }
      case Tactic::Kind::ThenAll: {
        auto gs = run(g, t.subs[0]);
        if (gs.size() != t.subs.size() - 1)
          not_applicable("expected " + std::to_string(t.subs.size() - 1) + " subgoals, got " + std::to_string(gs.size()));
        std::vector<int> out;
        for (std::size_t i = 0; i < gs.size(); ++i) {
          auto r = run(gs[i], t.subs[i + 1]);
          out.insert(out.end(), r.begin(), r.end());
        }
        return out;
      }
      case Tactic::Kind::OrElse: {
        ProofState saved = st_;
        try {
          return run(g, t.subs[0]);
        } catch (const Error&) {
          st_ = std::move(saved);
          return run(g, t.subs[1]);
        }
      }
      case Tactic::Kind::Try: {
        ProofState saved = st_;
        try {
          return run(g, t.subs[0]);
        } catch (const Error&) {
          st_ = std::move(saved);
          return {g};
        }
      }
      case Tactic::Kind::Repeat: {
        if (repeat_budget_-- <= 0) return {g};
        ProofState saved = st_;
        std::vector<int> gs;
        try {
          gs = run(g, t.subs[0]);
        } catch (const Error&) {
          st_ = std::move(saved);
          return {g};
        }
        std::vector<int> out;
        for (int x : gs) {
          auto r = run(x, t);
          out.insert(out.end(), r.begin(), r.end());
        }
        return out;
      }
    }
    return {g};
  }

  std::vector<int> automatic(int g, const AutoOptions& opt) {
    Sequent s = current(g);
    auto tree = search(s, st_.metas_, ctx(), opt);
    if (!tree) throw Error(ErrorKind::NotFound, "auto: no proof found within depth " + std::to_string(opt.depth));
    graft(g, *tree, 0);
    replace_goal(g, {});
    return {};
  }

 private:
  ProofState& st_;
  int repeat_budget_ = 20000;

  const ProverContext& ctx() const { return *st_.ctx_; }
  const PNode& node(int id) const { return *st_.nodes_[static_cast<std::size_t>(id)]; }

  Sequent current(int g) const {
    const PNode& n = node(g);
    if (!n.open) not_applicable("goal " + std::to_string(g) + " is not open");
    return st_.metas_.resolve(n.conclusion);
  }

  int add_open(Sequent s, std::optional<std::size_t> case_index) {
    auto n = std::make_shared<PNode>();
    n->conclusion = std::move(s);
    n->case_index = case_index;
    st_.nodes_.push_back(std::move(n));
    return static_cast<int>(st_.nodes_.size()) - 1;
  }

  void replace_goal(int g, const std::vector<int>& kids) {
    auto it = std::find(st_.goals_.begin(), st_.goals_.end(), g);
    if (it == st_.goals_.end()) return;
    it = st_.goals_.erase(it);
    st_.goals_.insert(it, kids.begin(), kids.end());
  }

  std::vector<int> close(int g, Instance inst) {
    auto n = std::make_shared<PNode>(node(g));
    n->open = false;
    std::vector<int> kids;
    for (auto& p : inst.premises) kids.push_back(add_open(std::move(p), n->case_index));
    inst.premises.clear();
    n->inst = std::move(inst);
    n->children = kids;
    st_.nodes_[static_cast<std::size_t>(g)] = std::move(n);
    replace_goal(g, kids);
    return kids;
  }

  void graft(int id, const SearchTree& tree, int at) {
    const auto& sn = tree.nodes[static_cast<std::size_t>(at)];
    auto n = std::make_shared<PNode>(node(id));
    n->open = false;
    n->inst = sn.inst;
    n->inst.premises.clear();
    for (int k : sn.kids) {
      int c = add_open(tree.nodes[static_cast<std::size_t>(k)].conclusion, n->case_index);
      n->children.push_back(c);
      graft(c, tree, k);
    }
    st_.nodes_[static_cast<std::size_t>(id)] = std::move(n);
  }

  int principal_index(const Sequent& s, const Tactic& t, const std::vector<Conn>& conns) {
    int n = static_cast<int>(s.delta.size());
    if (t.index) {
      int k = *t.index < 0 ? *t.index + n : *t.index;
      if (k < 0 || k >= n) not_applicable(std::string(rule_name(t.rule)) + ": principal index out of range");
      if (!conn_in(s.delta[k].formula.conn(), conns))
        not_applicable(std::string(rule_name(t.rule)) + ": hypothesis #" + std::to_string(k) + " has the wrong connective");
      return k;
    }
    std::vector<int> cands;
    for (int i = 0; i < n; ++i)
      if (conn_in(s.delta[i].formula.conn(), conns)) cands.push_back(i);
    if (cands.empty()) not_applicable(std::string(rule_name(t.rule)) + ": no suitable hypothesis");
    if (cands.size() > 1 && !rule_is_invertible(t.rule))
      throw Error(ErrorKind::AmbiguousPrincipal,
                  std::string(rule_name(t.rule)) + ": " + std::to_string(cands.size()) + " candidate hypotheses; give #k");
    return cands.front();
  }

  int copy_index(const Sequent& s, const Tactic& t) {
    int n = static_cast<int>(s.gamma.size());
    if (!t.label.empty()) {
      const Judgement* j = ctx().labelled(t.label);
      if (!j) not_applicable("copy: unknown label '" + t.label + "'");
      for (int i = 0; i < n; ++i)
        if (s.gamma[i] == *j) return i;
      not_applicable("copy: '" + t.label + "' is not in gamma");
    }
    if (t.index) {
      int k = *t.index < 0 ? *t.index + n : *t.index;
      if (k < 0 || k >= n) not_applicable("copy: index out of range");
      return k;
    }
    if (n == 1) return 0;
    if (n == 0) not_applicable("copy: gamma is empty");
    throw Error(ErrorKind::AmbiguousPrincipal, "copy: " + std::to_string(n) + " candidates; give an index or label");
  }

  std::vector<int> resolve_split(const Sequent& s, const Tactic& t, int skip) {
    int n = static_cast<int>(s.delta.size());
    if (!t.split) {
      if (n - (skip >= 0 ? 1 : 0) == 0) return {};
      throw Error(ErrorKind::AmbiguousPrincipal, std::string(rule_name(t.rule)) + ": split hint required");
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<int> out;
    for (const auto& item : *t.split) {
      int k = -1;
      if (item.index) {
        k = *item.index < 0 ? *item.index + n : *item.index;
        if (k < 0 || k >= n || k == skip || used[k]) not_applicable("invalid split index " + std::to_string(*item.index));
      } else {
        TokenStream ts(tokenize(item.pattern));
        FormulaParser fp(ts, ctx().parse);
        Formula f = st_.metas_.resolve(fp.formula());
        std::optional<WorldExpr> w;
        if (ts.accept("@")) w = st_.metas_.resolve(fp.world());
        if (!ts.at_end()) ts.fail({"end of pattern"}, "unexpected text in split pattern");
        for (int i = 0; i < n && k < 0; ++i)
          if (i != skip && !used[i] && s.delta[i].formula == f && (!w || s.delta[i].world == *w)) k = i;
        if (k < 0) not_applicable("split pattern '" + item.pattern + "' matches no hypothesis");
      }
      used[k] = true;
      out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Witness witness(const Tactic& t, const Formula& binder) {
    bool world = is_world_binder(binder.conn());
    if (t.witness.empty() || t.witness == "_") {
      std::string m = st_.metas_.new_meta(world, world ? "u" : "x");
      return world ? Witness{WorldExpr::meta(m)} : Witness{Term::meta(m)};
    }
    Witness w;
    if (world)
      w = parse_world(t.witness, ctx().parse);
    else
      w = parse_term(t.witness, ctx().parse);
    // Metavariables named in a witness join the store.
    FreeNames names;
    if (world) {
      collect_names(std::get<WorldExpr>(w), names);
    } else {
      std::set<std::string> vars, consts;
      std::get<Term>(w).collect(vars, names.term_metas, consts);
    }
    for (const auto& m : names.world_metas) st_.metas_.declare_meta(m, true);
    for (const auto& m : names.term_metas) st_.metas_.declare_meta(m, false);
    return w;
  }

  std::string eigen(const Tactic& t, const Sequent& s, const Formula& binder) {
    FreeNames names;
    collect_names(s, names);
    if (!t.fresh.empty()) {
      if (st_.metas_.known(t.fresh) || names.world_free.count(t.fresh) || names.term_vars.count(t.fresh) ||
          is_reserved_word(t.fresh))
        not_applicable("eigenvariable '" + t.fresh + "' is not fresh");
      return st_.metas_.new_eigen(t.fresh, names);
    }
    return st_.metas_.new_eigen(binder.name(), names);
  }

  std::vector<int> primitive(int g, const Tactic& t) {
    Sequent s = current(g);
    Instance inst;
    inst.rule = t.rule;
    if (t.rule == Rule::Init) {
      if (s.delta.size() != 1) not_applicable("init: linear zone must hold exactly one hypothesis");
      if (s.goal.formula.conn() != Conn::Atom || s.delta[0].formula.conn() != Conn::Atom)
        not_applicable("init: hypothesis and goal must be atoms");
      if (!st_.metas_.unify_atoms(s.delta[0], s.goal))
        throw Error(ErrorKind::UnificationFailed,
                    "init: cannot unify " + to_string(s.delta[0]) + " with " + to_string(s.goal));
      return close(g, std::move(inst));
    }
    if (t.rule == Rule::Copy) {
      inst.principal = copy_index(s, t);
    } else if (auto conns = left_connectives(t.rule)) {
      inst.principal = principal_index(s, t, *conns);
    }
    switch (t.rule) {
      case Rule::TensorR: inst.split = resolve_split(s, t, -1); break;
      case Rule::LimpL: inst.split = resolve_split(s, t, inst.principal); break;
      case Rule::ForallL: inst.witness = witness(t, s.delta[inst.principal].formula); break;
      case Rule::ExistsR:
        if (!is_binder(s.goal.formula.conn())) not_applicable("existsR: goal is not existential");
        inst.witness = witness(t, s.goal.formula);
        break;
      case Rule::ForallR:
        if (!is_binder(s.goal.formula.conn())) not_applicable("forallR: goal is not universal");
        inst.fresh = eigen(t, s, s.goal.formula);
        break;
      case Rule::ExistsL: inst.fresh = eigen(t, s, s.delta[inst.principal].formula); break;
      case Rule::Cut:
        if (!ctx().allow_cut) not_applicable("cut is disabled for this session");
        if (t.cut.empty()) not_applicable("cut needs a judgement");
        inst.cut = parse_judgement(t.cut, ctx().parse);
        inst.cut_kind = t.cut_kind;
        if (t.cut_kind == 1) inst.split = resolve_split(s, t, -1);
        break;
      default: break;
    }
    build_premises(s, inst);
    return close(g, std::move(inst));
  }

  std::vector<int> cases(int g) {
    Sequent s = current(g);
    if (!has_slots(s)) not_applicable("cases: goal has no rule slots");
    if (ctx().case_count == 0) not_applicable("cases: no rule family is loaded");
    auto n = std::make_shared<PNode>(node(g));
    n->open = false;
    n->is_case = true;
    std::vector<int> kids;
    for (std::size_t i = 0; i < ctx().case_count; ++i) kids.push_back(add_open(expand_slots(s, ctx(), i), i));
    n->children = kids;
    st_.nodes_[static_cast<std::size_t>(g)] = std::move(n);
    replace_goal(g, kids);
    return kids;
  }
};

ProofState ProofState::create(std::shared_ptr<const ProverContext> ctx, const std::vector<Sequent>& goals,
                              std::vector<std::string> root_labels) {
  ProofState ps;
  ps.ctx_ = std::move(ctx);
  for (std::size_t i = 0; i < goals.size(); ++i) {
    FreeNames names;
    collect_names(goals[i], names);
    for (const auto& m : names.world_metas) {
      if (!ps.metas_.known(m)) ps.declared_.push_back(m);
      ps.metas_.declare_meta(m, true);
    }
    for (const auto& m : names.term_metas) {
      if (!ps.metas_.known(m)) ps.declared_.push_back(m);
      ps.metas_.declare_meta(m, false);
    }
    for (const auto& v : names.world_free) ps.metas_.declare_rigid(v);
    for (const auto& v : names.term_vars) ps.metas_.declare_rigid(v);
    auto n = std::make_shared<PNode>();
    n->conclusion = goals[i];
    ps.nodes_.push_back(std::move(n));
    int id = static_cast<int>(ps.nodes_.size()) - 1;
    ps.roots_.push_back(id);
    ps.goals_.push_back(id);
    ps.root_labels_.push_back(i < root_labels.size() ? root_labels[i] : "goal " + std::to_string(i + 1));
  }
  return ps;
}

std::vector<GoalView> ProofState::goals() const {
  std::vector<GoalView> out;
  for (int id : goals_) {
    const PNode& n = *nodes_[static_cast<std::size_t>(id)];
    GoalView v{id, metas_.resolve(n.conclusion), n.case_index, {}};
    if (n.case_index && *n.case_index < ctx_->case_labels.size()) v.case_label = ctx_->case_labels[*n.case_index];
    out.push_back(std::move(v));
  }
  return out;
}

Sequent ProofState::goal_sequent(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) throw Error(ErrorKind::RuleNotApplicable, "no such goal");
  return metas_.resolve(nodes_[static_cast<std::size_t>(id)]->conclusion);
}

std::vector<std::pair<std::string, std::optional<std::string>>> ProofState::witnesses() const {
  std::vector<std::pair<std::string, std::optional<std::string>>> out;
  for (const auto& m : declared_) {
    std::optional<std::string> v;
    if (metas_.is_world_meta(m)) {
      WorldExpr w = metas_.resolve(WorldExpr::meta(m));
      if (!w.has_metas()) v = w.to_string();
    } else {
      Term t = metas_.resolve(Term::meta(m));
      if (!t.has_metas()) v = t.to_string();
    }
    out.emplace_back(m, v);
  }
  return out;
}

ProofState apply_tactic(const ProofState& ps, const Tactic& t, std::optional<int> goal) {
  if (ps.open_goals().empty()) throw Error(ErrorKind::RuleNotApplicable, "no open goals");
  int g = goal ? *goal : ps.open_goals().front();
  if (std::find(ps.open_goals().begin(), ps.open_goals().end(), g) == ps.open_goals().end())
    throw Error(ErrorKind::RuleNotApplicable, "goal " + std::to_string(g) + " is not open");
  ProofState next = ps;
  Engine(next).run(g, t);
  return next;
}

ProofState auto_search(const ProofState& ps, int goal, const AutoOptions& opt) {
  ProofState next = ps;
  Engine(next).automatic(goal, opt);
  return next;
}

namespace {

struct Extractor {
  const ProofState& ps;
  const std::vector<std::shared_ptr<const PNode>>& nodes;
  const MetaStore& metas;
  const ProverContext& ctx;

  bool tree_has_slots(int id) const {
    const PNode& n = *nodes[static_cast<std::size_t>(id)];
    if (n.is_case || has_slots(n.conclusion)) return true;
    for (int c : n.children)
      if (tree_has_slots(c)) return true;
    return false;
  }

  Judgement fix(const Judgement& j, std::optional<std::size_t> i) const {
    Judgement r = metas.resolve(j);
    if (i) r.formula = expand_slots(r.formula, ctx, *i);
    if (r.formula.has_metas() || r.world.has_metas())
      throw Error(ErrorKind::UnresolvedMetavariable, "unresolved metavariable in " + to_string(r));
    return r;
  }

  Derivation build(int id, std::optional<std::size_t> i) const {
    const PNode& n = *nodes[static_cast<std::size_t>(id)];
    if (n.is_case) return build(n.children[*i], i);
    Derivation d;
    d.rule = n.inst.rule;
    for (const auto& j : n.conclusion.gamma) d.conclusion.gamma.push_back(fix(j, i));
    for (const auto& j : n.conclusion.delta) d.conclusion.delta.push_back(fix(j, i));
    d.conclusion.goal = fix(n.conclusion.goal, i);
    d.principal = n.inst.principal;
    d.split = n.inst.split;
    d.fresh = n.inst.fresh;
    d.cut_kind = n.inst.cut_kind;
    if (n.inst.cut) d.cut = fix(*n.inst.cut, i);
    if (const auto* t = std::get_if<Term>(&n.inst.witness)) {
      Term r = metas.resolve(*t);
      if (r.has_metas()) throw Error(ErrorKind::UnresolvedMetavariable, "unresolved term witness " + r.to_string());
      d.witness = r;
    } else if (const auto* w = std::get_if<WorldExpr>(&n.inst.witness)) {
      WorldExpr r = metas.resolve(*w);
      if (r.has_metas()) throw Error(ErrorKind::UnresolvedMetavariable, "unresolved world witness " + r.to_string());
      d.witness = r;
    }
    for (int c : n.children) d.premises.push_back(build(c, i));
    return d;
  }
};

}  // namespace

Certificate extract_certificate(const ProofState& ps) {
  if (!ps.goals_.empty())
    throw Error(ErrorKind::OpenGoals, std::to_string(ps.goals_.size()) + " goal(s) remain open");
  Extractor ex{ps, ps.nodes_, ps.metas_, *ps.ctx_};
  Certificate c;
  c.allow_cut = ps.ctx_->allow_cut;
  c.signature = ps.ctx_->parse.signature;
  for (const auto& [name, value] : ps.witnesses()) {
    if (!value) throw Error(ErrorKind::UnresolvedMetavariable, "goal metavariable ?" + name + " is unresolved");
    c.witnesses[name] = *value;
  }
  for (std::size_t r = 0; r < ps.roots_.size(); ++r) {
    int root = ps.roots_[r];
    if (ex.tree_has_slots(root)) {
      for (std::size_t i = 0; i < ps.ctx_->case_count; ++i) {
        std::string label = ps.root_labels_[r] + " / " +
                            (i < ps.ctx_->case_labels.size() ? ps.ctx_->case_labels[i] : "case " + std::to_string(i + 1));
        c.obligations.push_back({label, static_cast<int>(i + 1), ex.build(root, i)});
      }
    } else {
      c.obligations.push_back({ps.root_labels_[r], std::nullopt, ex.build(root, std::nullopt)});
    }
  }
  return c;
}

}  // namespace hyll
