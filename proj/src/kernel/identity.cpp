#include "hyll/kernel.hpp"

namespace hyll {

namespace {

std::string pick_fresh(const std::string& hint, const std::set<std::string>& taken) {
  std::string base = hint.empty() ? "a" : hint;
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!taken.count(c)) return c;
  }
}

Derivation leaf(Rule r, Sequent s) {
  Derivation d;
  d.rule = r;
  d.conclusion = std::move(s);
  return d;
}

Derivation expand(const std::vector<Judgement>& gamma, const Formula& a, const WorldExpr& w) {
  Judgement self{a, w};
  Derivation d = leaf(Rule::Init, Sequent{gamma, {self}, self});
  auto sub = [&](std::vector<Judgement> delta, Judgement goal) { return Sequent{gamma, std::move(delta), std::move(goal)}; };

  switch (a.conn()) {
    case Conn::Atom: return d;
    case Conn::Slot: throw Error(ErrorKind::RuleNotApplicable, "identity expansion of a slot");
    case Conn::Tensor: {
      Judgement l{a.left(), w}, r{a.right(), w};
      Derivation right = leaf(Rule::TensorR, sub({l, r}, self));
      right.split = {0};
      right.premises = {expand(gamma, a.left(), w), expand(gamma, a.right(), w)};
      d.rule = Rule::TensorL;
      d.principal = 0;
      d.premises = {std::move(right)};
      return d;
    }
    case Conn::One:
      d.rule = Rule::OneL;
      d.principal = 0;
      d.premises = {leaf(Rule::OneR, sub({}, self))};
      return d;
    case Conn::Top: d.rule = Rule::TopR; return d;
    case Conn::Zero:
      d.rule = Rule::ZeroL;
      d.principal = 0;
      return d;
    case Conn::Limp: {
      Judgement l{a.left(), w}, r{a.right(), w};
      Derivation left = leaf(Rule::LimpL, sub({self, l}, r));
      left.principal = 0;
      left.split = {1};
      left.premises = {expand(gamma, a.left(), w), expand(gamma, a.right(), w)};
      d.rule = Rule::LimpR;
      d.premises = {std::move(left)};
      return d;
    }
    case Conn::With: {
      Derivation p1 = leaf(Rule::WithL1, sub({self}, Judgement{a.left(), w}));
      p1.principal = 0;
      p1.premises = {expand(gamma, a.left(), w)};
      Derivation p2 = leaf(Rule::WithL2, sub({self}, Judgement{a.right(), w}));
      p2.principal = 0;
      p2.premises = {expand(gamma, a.right(), w)};
      d.rule = Rule::WithR;
      d.premises = {std::move(p1), std::move(p2)};
      return d;
    }
    case Conn::Oplus: {
      Derivation p1 = leaf(Rule::OplusR1, sub({Judgement{a.left(), w}}, self));
      p1.premises = {expand(gamma, a.left(), w)};
      Derivation p2 = leaf(Rule::OplusR2, sub({Judgement{a.right(), w}}, self));
      p2.premises = {expand(gamma, a.right(), w)};
      d.rule = Rule::OplusL;
      d.principal = 0;
      d.premises = {std::move(p1), std::move(p2)};
      return d;
    }
    case Conn::Bang: {
      std::vector<Judgement> g2 = gamma;
      g2.push_back(Judgement{a.body(), w});
      Derivation copy = leaf(Rule::Copy, Sequent{g2, {}, Judgement{a.body(), w}});
      copy.principal = static_cast<int>(g2.size()) - 1;
      copy.premises = {expand(g2, a.body(), w)};
      Derivation right = leaf(Rule::BangR, Sequent{g2, {}, self});
      right.premises = {std::move(copy)};
      d.rule = Rule::BangL;
      d.principal = 0;
      d.premises = {std::move(right)};
      return d;
    }
    case Conn::ForallT:
    case Conn::ForallW:
    case Conn::ExistsT:
    case Conn::ExistsW: {
      bool world = is_world_binder(a.conn());
      bool universal = a.conn() == Conn::ForallT || a.conn() == Conn::ForallW;
      FreeNames names;
      collect_names(d.conclusion, names);
      std::string x = pick_fresh(a.name(), world ? names.world_free : names.term_vars);
      Formula inst = world ? a.instantiate(WorldExpr::free(x)) : a.instantiate(Term::var(x));
      Witness wit = world ? Witness{WorldExpr::free(x)} : Witness{Term::var(x)};
      Judgement ij{inst, w};
      // Eigenvariable rule below, instantiating rule on top of the identity.
      Derivation inner = universal ? leaf(Rule::ForallL, sub({self}, ij)) : leaf(Rule::ExistsR, sub({ij}, self));
      inner.principal = universal ? 0 : -1;
      inner.witness = wit;
      inner.premises = {expand(gamma, inst, w)};
      d.rule = universal ? Rule::ForallR : Rule::ExistsL;
      d.principal = universal ? -1 : 0;
      d.fresh = x;
      d.premises = {std::move(inner)};
      return d;
    }
    case Conn::At: {
      const WorldExpr& u = a.world();
      Derivation left = leaf(Rule::AtL, sub({self}, Judgement{a.body(), u}));
      left.principal = 0;
      left.premises = {expand(gamma, a.body(), u)};
      d.rule = Rule::AtR;
      d.premises = {std::move(left)};
      return d;
    }
    case Conn::Down: {
      Formula inst = a.instantiate(w);
      Derivation left = leaf(Rule::DownL, sub({self}, Judgement{inst, w}));
      left.principal = 0;
      left.premises = {expand(gamma, inst, w)};
      d.rule = Rule::DownR;
      d.premises = {std::move(left)};
      return d;
    }
  }
  return d;
}

}  // namespace

Derivation identity_expansion(const Formula& a, const WorldExpr& w) { return expand({}, a, w); }

}  // namespace hyll
