#include "hyll/prover.hpp"

namespace hyll {

std::uint32_t MetaStore::create(const std::string& name) {
  stamp_[name] = clock_;
  trail_.push_back({Entry::Kind::Create, name, 0});
  return clock_++;
}

void MetaStore::declare_meta(const std::string& name, bool world) {
  if (stamp_.count(name)) return;
  create(name);
  if (world) world_metas_.insert(name);
}

void MetaStore::declare_rigid(const std::string& name) {
  if (stamp_.count(name)) return;
  stamp_[name] = 0;
  trail_.push_back({Entry::Kind::Create, name, 0});
}

std::string MetaStore::new_meta(bool world, const std::string& hint) {
  std::string base = hint.empty() ? "m" : hint;
  std::string name;
  do {
    name = base + std::to_string(++counter_);
  } while (stamp_.count(name));
  create(name);
  if (world) world_metas_.insert(name);
  return name;
}

std::string MetaStore::new_eigen(const std::string& hint, const FreeNames& avoid) {
  std::string base = hint.empty() || is_reserved_word(hint) ? "a" : hint;
  auto taken = [&](const std::string& n) {
    return stamp_.count(n) || avoid.world_free.count(n) || avoid.term_vars.count(n) || avoid.consts.count(n) ||
           avoid.preds.count(n) || is_reserved_word(n);
  };
  std::string name = base;
  for (int i = 1; taken(name); ++i) name = base + std::to_string(i);
  create(name);
  return name;
}

WorldExpr MetaStore::resolve(const WorldExpr& w) const { return w.has_metas() ? hyll::resolve(w, worlds_) : w; }
Term MetaStore::resolve(const Term& t) const { return t.has_metas() ? hyll::resolve(t, terms_) : t; }
Formula MetaStore::resolve(const Formula& f) const { return f.has_metas() ? hyll::resolve(f, worlds_, terms_) : f; }
Judgement MetaStore::resolve(const Judgement& j) const { return Judgement{resolve(j.formula), resolve(j.world)}; }

Sequent MetaStore::resolve(const Sequent& s) const {
  Sequent out;
  out.gamma.reserve(s.gamma.size());
  out.delta.reserve(s.delta.size());
  for (const auto& j : s.gamma) out.gamma.push_back(resolve(j));
  for (const auto& j : s.delta) out.delta.push_back(resolve(j));
  out.goal = resolve(s.goal);
  return out;
}

bool MetaStore::scope_ok(const std::string& meta, const std::set<std::string>& free_names,
                         const std::set<std::string>& metas) {
  auto it = stamp_.find(meta);
  std::uint32_t level = it == stamp_.end() ? clock_ : it->second;
  for (const auto& n : free_names) {
    auto f = stamp_.find(n);
    if (f != stamp_.end() && f->second > level) return false;
  }
  for (const auto& n : metas) {
    auto f = stamp_.find(n);
    if (f != stamp_.end() && f->second > level) {
      trail_.push_back({Entry::Kind::Stamp, n, f->second});
      f->second = level;
    }
  }
  return true;
}

bool MetaStore::bind_world(const std::string& meta, const WorldExpr& value) {
  std::set<WorldVar> vars;
  value.collect(vars);
  std::set<std::string> free_names, metas;
  for (const auto& v : vars) {
    if (v.kind == VarKind::Free) free_names.insert(v.name);
    if (v.kind == VarKind::Meta) {
      if (v.name == meta) return false;
      metas.insert(v.name);
    }
  }
  if (!scope_ok(meta, free_names, metas)) return false;
  worlds_[meta] = value;
  trail_.push_back({Entry::Kind::World, meta, 0});
  return true;
}

bool MetaStore::bind_term(const std::string& meta, const Term& value) {
  std::set<std::string> vars, metas, consts;
  value.collect(vars, metas, consts);
  if (metas.count(meta)) return false;
  if (!scope_ok(meta, vars, metas)) return false;
  terms_[meta] = value;
  trail_.push_back({Entry::Kind::Term, meta, 0});
  return true;
}

bool MetaStore::unify(const Term& a0, const Term& b0) {
  Term a = resolve(a0), b = resolve(b0);
  if (a.kind() == TermKind::Meta) {
    if (b.kind() == TermKind::Meta && b.name() == a.name()) return true;
    return bind_term(a.name(), b);
  }
  if (b.kind() == TermKind::Meta) return bind_term(b.name(), a);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
    case TermKind::Const: return a.name() == b.name();
    case TermKind::Bound: return a.index() == b.index();
    case TermKind::App:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!unify(a.args()[i], b.args()[i])) return false;
      return true;
    case TermKind::Meta: break;
  }
  return false;
}

bool MetaStore::unify(const WorldExpr& a, const WorldExpr& b) {
  WorldExpr ra = resolve(a), rb = resolve(b);
  if (ra == rb) return true;
  WorldUnifyResult r = unify_worlds(ra, rb, worlds_);
  if (!r.ok) return false;
  for (const auto& [name, value] : r.added)
    if (!bind_world(name, resolve(value))) return false;
  return true;
}

bool MetaStore::unify_atoms(const Judgement& a, const Judgement& b) {
  const Formula& fa = a.formula;
  const Formula& fb = b.formula;
  if (fa.conn() != Conn::Atom || fb.conn() != Conn::Atom) return false;
  if (fa.name() != fb.name() || fa.args().size() != fb.args().size()) return false;
  std::size_t m = mark();
  for (std::size_t i = 0; i < fa.args().size(); ++i) {
    if (!unify(fa.args()[i], fb.args()[i])) {
      undo(m);
      return false;
    }
  }
  if (!unify(a.world, b.world)) {
    undo(m);
    return false;
  }
  return true;
}

void MetaStore::undo(std::size_t m) {
  while (trail_.size() > m) {
    Entry e = std::move(trail_.back());
    trail_.pop_back();
    switch (e.kind) {
      case Entry::Kind::World: worlds_.erase(e.name); break;
      case Entry::Kind::Term: terms_.erase(e.name); break;
      case Entry::Kind::Stamp: stamp_[e.name] = e.old; break;
      case Entry::Kind::Create:
        stamp_.erase(e.name);
        world_metas_.erase(e.name);
        break;
    }
  }
}

}  // namespace hyll
