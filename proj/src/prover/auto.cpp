#include <algorithm>
#include <unordered_map>

#include "internal.hpp"

namespace hyll {

namespace {

struct Atoms {
  std::set<std::string> names;
  bool zero = false;
  bool top = false;
  bool one = false;
  bool slot = false;
};

bool unary(Conn c) { return c == Conn::Bang || c == Conn::At || c == Conn::Down || is_binder(c); }
bool binary(Conn c) { return c == Conn::Tensor || c == Conn::Limp || c == Conn::With || c == Conn::Oplus; }

void atoms_of(const Formula& f, Atoms& a) {
  Conn c = f.conn();
  if (c == Conn::Atom) a.names.insert(f.name());
  else if (c == Conn::Zero) a.zero = true;
  else if (c == Conn::Top) a.top = true;
  else if (c == Conn::One) a.one = true;
  else if (c == Conn::Slot) a.slot = true;
  else if (binary(c)) {
    atoms_of(f.left(), a);
    atoms_of(f.right(), a);
  } else if (unary(c)) {
    atoms_of(f.body(), a);
  }
}

// What a hypothesis can eventually put into the linear zone.
void heads(const Formula& f, Atoms& a) {
  Conn c = f.conn();
  if (c == Conn::Limp) heads(f.right(), a);
  else if (binary(c)) {
    heads(f.left(), a);
    heads(f.right(), a);
  } else if (unary(c)) {
    heads(f.body(), a);
  } else {
    atoms_of(f, a);
  }
}

// Atoms a hypothesis can consume.
void antecedents(const Formula& f, Atoms& a) {
  Conn c = f.conn();
  if (c == Conn::Limp) {
    atoms_of(f.left(), a);
    antecedents(f.right(), a);
  } else if (binary(c)) {
    antecedents(f.left(), a);
    antecedents(f.right(), a);
  } else if (unary(c)) {
    antecedents(f.body(), a);
  }
}

// Atoms any proof of the goal must produce.
void needs(const Formula& f, std::set<std::string>& out) {
  Conn c = f.conn();
  if (c == Conn::Atom) out.insert(f.name());
  else if (c == Conn::Tensor || c == Conn::With) {
    needs(f.left(), out);
    needs(f.right(), out);
  } else if (c == Conn::Limp) {
    std::set<std::string> r;
    needs(f.right(), r);
    Atoms l;
    atoms_of(f.left(), l);
    for (const auto& n : r)
      if (!l.names.count(n)) out.insert(n);
  } else if (unary(c)) {
    needs(f.body(), out);
  }
}

// Necessary conditions for cut-free provability, on predicate names only.
bool plausible(const Sequent& s) {
  Atoms hyp;
  for (const auto& j : s.gamma) atoms_of(j.formula, hyp);
  for (const auto& j : s.delta) atoms_of(j.formula, hyp);
  Atoms goal;
  atoms_of(s.goal.formula, goal);
  if (hyp.zero || hyp.slot || goal.slot) return true;
  std::set<std::string> need;
  needs(s.goal.formula, need);
  for (const auto& n : need)
    if (!hyp.names.count(n)) return false;
  if (goal.top || hyp.top) return true;
  Atoms ante;
  for (const auto& j : s.gamma) antecedents(j.formula, ante);
  for (const auto& j : s.delta) antecedents(j.formula, ante);
  for (const auto& j : s.delta)
    if (j.formula.conn() == Conn::Atom && !goal.names.count(j.formula.name()) && !ante.names.count(j.formula.name()))
      return false;
  return true;
}

bool ground(const Sequent& s) {
  auto g = [](const Judgement& j) { return !j.formula.has_metas() && !j.world.has_metas(); };
  return std::all_of(s.gamma.begin(), s.gamma.end(), g) && std::all_of(s.delta.begin(), s.delta.end(), g) &&
         g(s.goal);
}

// Subsets of {0..n-1} ordered by size, then lexicographically by mask.
std::vector<std::vector<int>> subsets(int n) {
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  std::vector<std::vector<int>> out;
  for (unsigned m : masks) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

struct Exhausted {};

class Searcher {
 public:
  Searcher(MetaStore& ms, const ProverContext& ctx, const AutoOptions& opt) : ms_(ms), ctx_(ctx), opt_(opt) {}

  std::optional<SearchTree> run(const Sequent& goal) {
    std::size_t m = ms_.mark();
    tree_.nodes.push_back({ms_.resolve(goal), {}, {}});
    try {
      // Iterative deepening keeps proofs short and finds shallow ones fast.
      if (plausible(tree_.nodes[0].conclusion)) {
        for (int d = 0; d <= opt_.depth; ++d) {
          if (solve({{0, d}})) {
            ground_leftovers();
            return std::move(tree_);
          }
        }
      }
    } catch (const Exhausted&) {
    }
    ms_.undo(m);
    return std::nullopt;
  }

 private:
  struct Goal {
    int id;
    int depth;
  };

  MetaStore& ms_;
  const ProverContext& ctx_;
  AutoOptions opt_;
  SearchTree tree_;
  std::size_t steps_ = 0;
  std::unordered_map<std::string, int> failed_;
  std::vector<std::pair<std::string, bool>> created_;

  // Witnesses nothing constrained get a default value so the proof extracts.
  void ground_leftovers() {
    for (const auto& [m, world] : created_) {
      if (!ms_.known(m)) continue;
      if (world) {
        WorldExpr w = ms_.resolve(WorldExpr::meta(m));
        if (w == WorldExpr::meta(m)) ms_.unify(w, WorldExpr::iota());
      } else {
        Term t = ms_.resolve(Term::meta(m));
        if (t.kind() == TermKind::Meta) ms_.unify(t, Term::constant("c"));
      }
    }
  }

  std::string fresh_meta(bool world) {
    std::string m = ms_.new_meta(world, world ? "u" : "x");
    created_.emplace_back(m, world);
    return m;
  }

  void reset(int id, std::size_t size) {
    tree_.nodes.resize(size);
    tree_.nodes[static_cast<std::size_t>(id)].kids.clear();
    tree_.nodes[static_cast<std::size_t>(id)].inst = Instance{};
  }

  bool solve(std::vector<Goal> agenda) {
    if (agenda.empty()) return true;
    if (++steps_ > opt_.budget) throw Exhausted{};
    Goal g = agenda.front();
    agenda.erase(agenda.begin());
    Sequent s = ms_.resolve(tree_.nodes[static_cast<std::size_t>(g.id)].conclusion);
    bool is_ground = ground(s);
    if (is_ground && !agenda.empty()) {
      // A ground goal shares nothing with its siblings, so any proof will do.
      std::size_t tm = ms_.mark(), nm = tree_.nodes.size();
      if (!solve({g})) return false;
      if (solve(std::move(agenda))) return true;
      ms_.undo(tm);
      reset(g.id, nm);
      return false;
    }
    std::string key;
    if (is_ground) {
      key = to_string(s);
      auto it = failed_.find(key);
      if (it != failed_.end() && it->second >= g.depth) return false;
    }
    bool ok = expand(g, s, agenda);
    if (!ok && is_ground) {
      int& d = failed_[key];
      d = std::max(d, g.depth);
    }
    return ok;
  }

  bool attempt(const Goal& g, const Sequent& s, Instance inst, int depth, std::size_t tm,
               const std::vector<Goal>& rest) {
    std::size_t nm = tree_.nodes.size();
    try {
      build_premises(s, inst);
    } catch (const Error&) {
      ms_.undo(tm);
      return false;
    }
    for (const auto& p : inst.premises) {
      if (!plausible(p)) {
        ms_.undo(tm);
        return false;
      }
    }
    std::vector<Goal> next;
    std::vector<int> kids;
    for (auto& p : inst.premises) {
      tree_.nodes.push_back({std::move(p), {}, {}});
      int id = static_cast<int>(tree_.nodes.size()) - 1;
      kids.push_back(id);
      next.push_back({id, depth});
    }
    inst.premises.clear();
    auto& node = tree_.nodes[static_cast<std::size_t>(g.id)];
    node.inst = std::move(inst);
    node.kids = kids;
    next.insert(next.end(), rest.begin(), rest.end());
    if (solve(std::move(next))) return true;
    ms_.undo(tm);
    reset(g.id, nm);
    return false;
  }

  bool simple(const Goal& g, const Sequent& s, Rule r, int principal, int depth, const std::vector<Goal>& rest) {
    Instance in;
    in.rule = r;
    in.principal = principal;
    return attempt(g, s, std::move(in), depth, ms_.mark(), rest);
  }

  FreeNames names(const Sequent& s) const {
    FreeNames n;
    collect_names(s, n);
    return n;
  }

  std::optional<Rule> eager_left(Conn c) const {
    switch (c) {
      case Conn::One: return Rule::OneL;
      case Conn::Tensor: return Rule::TensorL;
      case Conn::Oplus: return Rule::OplusL;
      case Conn::Bang: return Rule::BangL;
      case Conn::ExistsT:
      case Conn::ExistsW: return Rule::ExistsL;
      case Conn::At: return Rule::AtL;
      case Conn::Down: return Rule::DownL;
      default: return std::nullopt;
    }
  }

  bool copy_allowed(const Sequent& s, int j) const {
    const Judgement& h = s.gamma[static_cast<std::size_t>(j)];
    if (opt_.using_labels) {
      for (const auto& [label, jd] : ctx_.labels) {
        if (jd == h) {
          if (std::find(opt_.using_labels->begin(), opt_.using_labels->end(), label) == opt_.using_labels->end())
            return false;
          break;
        }
      }
    }
    Atoms hd;
    heads(h.formula, hd);
    if (hd.zero || hd.one || hd.top || hd.slot) return true;
    Atoms want;
    atoms_of(s.goal.formula, want);
    for (const auto& x : s.gamma) antecedents(x.formula, want);
    for (const auto& x : s.delta) antecedents(x.formula, want);
    if (want.top) return true;
    for (const auto& n : hd.names)
      if (want.names.count(n)) return true;
    return false;
  }

  bool expand(const Goal& g, const Sequent& s, const std::vector<Goal>& rest) {
    const int n = static_cast<int>(s.delta.size());
    const Formula& goal = s.goal.formula;

    for (int i = 0; i < n; ++i)
      if (s.delta[i].formula.conn() == Conn::Zero) return simple(g, s, Rule::ZeroL, i, g.depth, rest);
    if (goal.conn() == Conn::Top) return simple(g, s, Rule::TopR, -1, g.depth, rest);

    for (int i = 0; i < n; ++i) {
      const Formula& f = s.delta[i].formula;
      auto r = eager_left(f.conn());
      if (!r) continue;
      Instance in;
      in.rule = *r;
      in.principal = i;
      std::size_t tm = ms_.mark();
      if (*r == Rule::ExistsL) in.fresh = ms_.new_eigen(f.name(), names(s));
      return attempt(g, s, std::move(in), g.depth, tm, rest);
    }

    switch (goal.conn()) {
      case Conn::Limp: return simple(g, s, Rule::LimpR, -1, g.depth, rest);
      case Conn::With: return simple(g, s, Rule::WithR, -1, g.depth, rest);
      case Conn::At: return simple(g, s, Rule::AtR, -1, g.depth, rest);
      case Conn::Down: return simple(g, s, Rule::DownR, -1, g.depth, rest);
      case Conn::ForallT:
      case Conn::ForallW: {
        Instance in;
        in.rule = Rule::ForallR;
        std::size_t tm = ms_.mark();
        in.fresh = ms_.new_eigen(goal.name(), names(s));
        return attempt(g, s, std::move(in), g.depth, tm, rest);
      }
      case Conn::Bang:
        if (n == 0) return simple(g, s, Rule::BangR, -1, g.depth, rest);
        break;
      default: break;
    }

    if (n == 1 && goal.conn() == Conn::Atom && s.delta[0].formula.conn() == Conn::Atom) {
      std::size_t tm = ms_.mark();
      if (ms_.unify_atoms(s.delta[0], s.goal)) {
        auto& node = tree_.nodes[static_cast<std::size_t>(g.id)];
        node.inst = Instance{};
        node.inst.rule = Rule::Init;
        if (solve(rest)) return true;
        ms_.undo(tm);
        tree_.nodes[static_cast<std::size_t>(g.id)].inst = Instance{};
      }
    }
    if (goal.conn() == Conn::One && n == 0 && simple(g, s, Rule::OneR, -1, g.depth, rest)) return true;
    if (g.depth <= 0) return false;
    const int d = g.depth - 1;

    switch (goal.conn()) {
      case Conn::Oplus:
        if (simple(g, s, Rule::OplusR1, -1, d, rest)) return true;
        if (simple(g, s, Rule::OplusR2, -1, d, rest)) return true;
        break;
      case Conn::ExistsT:
      case Conn::ExistsW: {
        Instance in;
        in.rule = Rule::ExistsR;
        std::size_t tm = ms_.mark();
        bool w = goal.conn() == Conn::ExistsW;
        std::string m = fresh_meta(w);
        in.witness = w ? Witness{WorldExpr::meta(m)} : Witness{Term::meta(m)};
        if (attempt(g, s, std::move(in), d, tm, rest)) return true;
        break;
      }
      case Conn::Tensor:
        for (const auto& split : subsets(n)) {
          Instance in;
          in.rule = Rule::TensorR;
          in.split = split;
          if (attempt(g, s, std::move(in), d, ms_.mark(), rest)) return true;
        }
        break;
      default: break;
    }

    for (int i = 0; i < n; ++i) {
      const Formula& f = s.delta[i].formula;
      switch (f.conn()) {
        case Conn::Limp:
          for (const auto& sub : subsets(n - 1)) {
            Instance in;
            in.rule = Rule::LimpL;
            in.principal = i;
            for (int k : sub) in.split.push_back(k < i ? k : k + 1);
            if (attempt(g, s, std::move(in), d, ms_.mark(), rest)) return true;
          }
          break;
        case Conn::With:
          if (simple(g, s, Rule::WithL1, i, d, rest)) return true;
          if (simple(g, s, Rule::WithL2, i, d, rest)) return true;
          break;
        case Conn::ForallT:
        case Conn::ForallW: {
          Instance in;
          in.rule = Rule::ForallL;
          in.principal = i;
          std::size_t tm = ms_.mark();
          bool w = f.conn() == Conn::ForallW;
          std::string m = fresh_meta(w);
          in.witness = w ? Witness{WorldExpr::meta(m)} : Witness{Term::meta(m)};
          if (attempt(g, s, std::move(in), d, tm, rest)) return true;
          break;
        }
        default: break;
      }
    }

    for (int j = 0; j < static_cast<int>(s.gamma.size()); ++j) {
      if (!copy_allowed(s, j)) continue;
      if (simple(g, s, Rule::Copy, j, d, rest)) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<SearchTree> search(const Sequent& goal, MetaStore& ms, const ProverContext& ctx, const AutoOptions& opt) {
  return Searcher(ms, ctx, opt).run(goal);
}

}  // namespace hyll
