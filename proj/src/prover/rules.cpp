#include "hyll/prover.hpp"

namespace hyll {

namespace {

[[noreturn]] void not_applicable(const std::string& msg) { throw Error(ErrorKind::RuleNotApplicable, msg); }

std::vector<Judgement> without(const std::vector<Judgement>& d, int skip) {
  std::vector<Judgement> out;
  out.reserve(d.size());
  for (int i = 0; i < static_cast<int>(d.size()); ++i)
    if (i != skip) out.push_back(d[i]);
  return out;
}

void partition(const Sequent& s, const std::vector<int>& split, int skip, std::vector<Judgement>& first,
               std::vector<Judgement>& rest) {
  std::vector<bool> in(s.delta.size(), false);
  for (int i : split) {
    if (i < 0 || i >= static_cast<int>(s.delta.size()) || i == skip || in[i])
      not_applicable("invalid split index " + std::to_string(i));
    in[i] = true;
  }
  for (int i = 0; i < static_cast<int>(s.delta.size()); ++i) {
    if (i == skip) continue;
    (in[i] ? first : rest).push_back(s.delta[i]);
  }
}

Formula instantiate(const Formula& binder, const Witness& w) {
  if (is_world_binder(binder.conn())) {
    const auto* x = std::get_if<WorldExpr>(&w);
    if (!x) not_applicable("expected a world witness");
    return binder.instantiate(*x);
  }
  const auto* t = std::get_if<Term>(&w);
  if (!t) not_applicable("expected a term witness");
  return binder.instantiate(*t);
}

Formula instantiate_fresh(const Formula& binder, const std::string& name) {
  return is_world_binder(binder.conn()) ? binder.instantiate(WorldExpr::free(name))
                                        : binder.instantiate(Term::var(name));
}

}  // namespace

bool rule_is_invertible(Rule r) {
  switch (r) {
    case Rule::OneL:
    case Rule::ZeroL:
    case Rule::TensorL:
    case Rule::OplusL:
    case Rule::BangL:
    case Rule::ExistsL:
    case Rule::TopR:
    case Rule::LimpR:
    case Rule::WithR:
    case Rule::ForallR:
    case Rule::AtR:
    case Rule::AtL:
    case Rule::DownR:
    case Rule::DownL: return true;
    default: return false;
  }
}

std::optional<std::vector<Conn>> left_connectives(Rule r) {
  switch (r) {
    case Rule::TensorL: return std::vector<Conn>{Conn::Tensor};
    case Rule::OneL: return std::vector<Conn>{Conn::One};
    case Rule::LimpL: return std::vector<Conn>{Conn::Limp};
    case Rule::ZeroL: return std::vector<Conn>{Conn::Zero};
    case Rule::WithL1:
    case Rule::WithL2: return std::vector<Conn>{Conn::With};
    case Rule::OplusL: return std::vector<Conn>{Conn::Oplus};
    case Rule::ForallL: return std::vector<Conn>{Conn::ForallT, Conn::ForallW};
    case Rule::ExistsL: return std::vector<Conn>{Conn::ExistsT, Conn::ExistsW};
    case Rule::BangL: return std::vector<Conn>{Conn::Bang};
    case Rule::AtL: return std::vector<Conn>{Conn::At};
    case Rule::DownL: return std::vector<Conn>{Conn::Down};
    default: return std::nullopt;
  }
}

void build_premises(const Sequent& s, Instance& in) {
  in.premises.clear();
  const Formula& g = s.goal.formula;
  const WorldExpr& gw = s.goal.world;
  auto push = [&](std::vector<Judgement> delta, Judgement goal) {
    in.premises.push_back(Sequent{s.gamma, std::move(delta), std::move(goal)});
  };
  auto need_goal = [&](std::initializer_list<Conn> cs) {
    for (Conn c : cs)
      if (g.conn() == c) return;
    not_applicable(std::string(rule_name(in.rule)) + ": goal has the wrong connective");
  };
  const Judgement* h = nullptr;
  if (auto conns = left_connectives(in.rule)) {
    if (in.principal < 0 || in.principal >= static_cast<int>(s.delta.size()))
      not_applicable(std::string(rule_name(in.rule)) + ": principal index out of range");
    h = &s.delta[in.principal];
    bool ok = false;
    for (Conn c : *conns) ok = ok || h->formula.conn() == c;
    if (!ok) not_applicable(std::string(rule_name(in.rule)) + ": principal has the wrong connective");
  }

  switch (in.rule) {
    case Rule::Init: not_applicable("init is resolved by unification");
    case Rule::Copy: {
      if (in.principal < 0 || in.principal >= static_cast<int>(s.gamma.size())) not_applicable("copy index out of range");
      auto delta = s.delta;
      delta.push_back(s.gamma[in.principal]);
      push(delta, s.goal);
      break;
    }
    case Rule::TensorR: {
      need_goal({Conn::Tensor});
      std::vector<Judgement> a, b;
      partition(s, in.split, -1, a, b);
      push(a, {g.left(), gw});
      push(b, {g.right(), gw});
      break;
    }
    case Rule::TensorL: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({h->formula.left(), h->world});
      delta.push_back({h->formula.right(), h->world});
      push(delta, s.goal);
      break;
    }
    case Rule::OneR:
      need_goal({Conn::One});
      if (!s.delta.empty()) not_applicable("oneR: linear zone is not empty");
      break;
    case Rule::OneL: push(without(s.delta, in.principal), s.goal); break;
    case Rule::LimpR: {
      need_goal({Conn::Limp});
      auto delta = s.delta;
      delta.push_back({g.left(), gw});
      push(delta, {g.right(), gw});
      break;
    }
    case Rule::LimpL: {
      std::vector<Judgement> a, b;
      partition(s, in.split, in.principal, a, b);
      b.push_back({h->formula.right(), h->world});
      push(a, {h->formula.left(), h->world});
      push(b, s.goal);
      break;
    }
    case Rule::TopR: need_goal({Conn::Top}); break;
    case Rule::ZeroL: break;
    case Rule::WithR:
      need_goal({Conn::With});
      push(s.delta, {g.left(), gw});
      push(s.delta, {g.right(), gw});
      break;
    case Rule::WithL1:
    case Rule::WithL2: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({in.rule == Rule::WithL1 ? h->formula.left() : h->formula.right(), h->world});
      push(delta, s.goal);
      break;
    }
    case Rule::OplusR1:
    case Rule::OplusR2:
      need_goal({Conn::Oplus});
      push(s.delta, {in.rule == Rule::OplusR1 ? g.left() : g.right(), gw});
      break;
    case Rule::OplusL: {
      auto base = without(s.delta, in.principal);
      auto a = base, b = base;
      a.push_back({h->formula.left(), h->world});
      b.push_back({h->formula.right(), h->world});
      push(a, s.goal);
      push(b, s.goal);
      break;
    }
    case Rule::ForallR:
      need_goal({Conn::ForallT, Conn::ForallW});
      push(s.delta, {instantiate_fresh(g, in.fresh), gw});
      break;
    case Rule::ExistsR:
      need_goal({Conn::ExistsT, Conn::ExistsW});
      push(s.delta, {instantiate(g, in.witness), gw});
      break;
    case Rule::ForallL: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({instantiate(h->formula, in.witness), h->world});
      push(delta, s.goal);
      break;
    }
    case Rule::ExistsL: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({instantiate_fresh(h->formula, in.fresh), h->world});
      push(delta, s.goal);
      break;
    }
    case Rule::BangR:
      need_goal({Conn::Bang});
      if (!s.delta.empty()) not_applicable("bangR: linear zone is not empty");
      push({}, {g.body(), gw});
      break;
    case Rule::BangL: {
      Sequent p{s.gamma, without(s.delta, in.principal), s.goal};
      p.gamma.push_back({h->formula.body(), h->world});
      in.premises.push_back(std::move(p));
      break;
    }
    case Rule::AtR:
      need_goal({Conn::At});
      push(s.delta, {g.body(), g.world()});
      break;
    case Rule::AtL: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({h->formula.body(), h->formula.world()});
      push(delta, s.goal);
      break;
    }
    case Rule::DownR:
      need_goal({Conn::Down});
      push(s.delta, {g.instantiate(gw), gw});
      break;
    case Rule::DownL: {
      auto delta = without(s.delta, in.principal);
      delta.push_back({h->formula.instantiate(h->world), h->world});
      push(delta, s.goal);
      break;
    }
    case Rule::Cut: {
      if (!in.cut) not_applicable("cut needs a cut judgement");
      if (in.cut_kind == 1) {
        std::vector<Judgement> a, b;
        partition(s, in.split, -1, a, b);
        b.push_back(*in.cut);
        push(a, *in.cut);
        push(b, s.goal);
      } else {
        push({}, *in.cut);
        Sequent p = s;
        p.gamma.push_back(*in.cut);
        in.premises.push_back(std::move(p));
      }
      break;
    }
  }
}

Formula expand_slots(const Formula& f, const ProverContext& ctx, std::size_t i) {
  if (!f.has_slots()) return f;
  switch (f.conn()) {
    case Conn::Slot: {
      auto it = ctx.families.find(f.name());
      if (it == ctx.families.end()) throw Error(ErrorKind::RuleNotApplicable, "unknown rule family '" + f.name() + "'");
      if (i >= it->second.size()) throw Error(ErrorKind::RuleNotApplicable, "rule index out of range");
      return it->second[i];
    }
    case Conn::Tensor: return Formula::tensor(expand_slots(f.left(), ctx, i), expand_slots(f.right(), ctx, i));
    case Conn::Limp: return Formula::limp(expand_slots(f.left(), ctx, i), expand_slots(f.right(), ctx, i));
    case Conn::With: return Formula::with(expand_slots(f.left(), ctx, i), expand_slots(f.right(), ctx, i));
    case Conn::Oplus: return Formula::oplus(expand_slots(f.left(), ctx, i), expand_slots(f.right(), ctx, i));
    case Conn::Bang: return Formula::bang(expand_slots(f.body(), ctx, i));
    case Conn::At: return Formula::at(expand_slots(f.body(), ctx, i), f.world());
    default:
      if (is_binder(f.conn())) return Formula::binder(f.conn(), f.name(), expand_slots(f.body(), ctx, i));
      return f;
  }
}

Sequent expand_slots(const Sequent& s, const ProverContext& ctx, std::size_t i) {
  Sequent out = s;
  for (auto& j : out.gamma) j.formula = expand_slots(j.formula, ctx, i);
  for (auto& j : out.delta) j.formula = expand_slots(j.formula, ctx, i);
  out.goal.formula = expand_slots(out.goal.formula, ctx, i);
  return out;
}

bool has_slots(const Sequent& s) {
  for (const auto& j : s.gamma)
    if (j.formula.has_slots()) return true;
  for (const auto& j : s.delta)
    if (j.formula.has_slots()) return true;
  return s.goal.formula.has_slots();
}

const Judgement* ProverContext::labelled(const std::string& name) const {
  for (const auto& [l, j] : labels)
    if (l == name) return &j;
  return nullptr;
}

}  // namespace hyll
