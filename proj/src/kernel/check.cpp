#include <array>

#include "hyll/kernel.hpp"

namespace hyll {

namespace {

constexpr std::array<const char*, 27> kRuleNames = {
    "init",    "copy",    "tensorR", "tensorL", "oneR",    "oneL",    "limpR",   "limpL",   "topR",
    "zeroL",   "withR",   "withL1",  "withL2",  "oplusR1", "oplusR2", "oplusL",  "forallR", "forallL",
    "existsR", "existsL", "bangR",   "bangL",   "atR",     "atL",     "downR",   "downL",   "cut",
};

struct Failure {
  CheckReason reason;
  std::string detail;
};

using Delta = std::vector<Judgement>;

Delta without(const Delta& d, int skip) {
  Delta out;
  out.reserve(d.size());
  for (int i = 0; i < static_cast<int>(d.size()); ++i)
    if (i != skip) out.push_back(d[i]);
  return out;
}

bool is_quantifier(Conn c, bool universal) {
  return universal ? (c == Conn::ForallT || c == Conn::ForallW) : (c == Conn::ExistsT || c == Conn::ExistsW);
}

class Checker {
 public:
  explicit Checker(bool allow_cut) : allow_cut_(allow_cut) {}

  std::optional<CheckError> run(const Derivation& d) {
    if (auto f = node(d)) return CheckError{path_, f->reason, f->detail};
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      path_.push_back(static_cast<int>(i));
      if (auto e = run(d.premises[i])) return e;
      path_.pop_back();
    }
    return std::nullopt;
  }

 private:
  bool allow_cut_;
  std::vector<int> path_;

  static std::optional<Failure> fail(CheckReason r, std::string msg) { return Failure{r, std::move(msg)}; }

  static std::optional<Failure> unresolved(const Judgement& j) {
    if (j.formula.has_slots()) return fail(CheckReason::UnresolvedSlot, to_string(j));
    if (j.formula.has_metas() || j.world.has_metas())
      return fail(CheckReason::UnresolvedMetavariable, to_string(j));
    return std::nullopt;
  }

  // Compares a premise conclusion against the demanded sequent.
  static std::optional<Failure> expect(const Derivation& p, const Sequent& want, std::size_t i) {
    const Sequent& got = p.conclusion;
    std::string where = "premise " + std::to_string(i) + ": ";
    if (!multiset_equal(got.gamma, want.gamma)) return fail(CheckReason::ContextMismatch, where + "gamma differs");
    if (!multiset_equal(got.delta, want.delta)) return fail(CheckReason::ContextMismatch, where + "delta differs");
    if (got.goal.formula != want.goal.formula)
      return fail(CheckReason::FormulaMismatch, where + "goal " + to_string(got.goal) + ", expected " +
                                                    to_string(want.goal));
    if (got.goal.world != want.goal.world)
      return fail(CheckReason::WorldMismatch, where + "goal world " + got.goal.world.to_string() + ", expected " +
                                                  want.goal.world.to_string());
    return std::nullopt;
  }

  std::optional<Failure> principal(const Derivation& d, Conn c) {
    const auto& delta = d.conclusion.delta;
    if (d.principal < 0 || d.principal >= static_cast<int>(delta.size()))
      return fail(CheckReason::BadPrincipal, "principal index " + std::to_string(d.principal) + " out of range");
    if (delta[d.principal].formula.conn() != c)
      return fail(CheckReason::BadPrincipal,
                  std::string("principal is not a ") + conn_name(c) + ": " + to_string(delta[d.principal]));
    return std::nullopt;
  }

  static std::optional<Failure> goal_is(const Derivation& d, Conn c) {
    if (d.conclusion.goal.formula.conn() != c)
      return fail(CheckReason::FormulaMismatch,
                  std::string("goal is not a ") + conn_name(c) + ": " + to_string(d.conclusion.goal));
    return std::nullopt;
  }

  // Partition of delta by a split mask; skip is excluded from both halves.
  static std::optional<Failure> partition(const Derivation& d, int skip, Delta& first, Delta& rest) {
    const auto& delta = d.conclusion.delta;
    std::vector<bool> in(delta.size(), false);
    for (int i : d.split) {
      if (i < 0 || i >= static_cast<int>(delta.size()) || i == skip || in[i])
        return fail(CheckReason::BadSplit, "invalid split index " + std::to_string(i));
      in[i] = true;
    }
    for (int i = 0; i < static_cast<int>(delta.size()); ++i) {
      if (i == skip) continue;
      (in[i] ? first : rest).push_back(delta[i]);
    }
    return std::nullopt;
  }

  static std::optional<Failure> freshness(const Derivation& d, bool world) {
    if (d.fresh.empty()) return fail(CheckReason::FreshnessViolated, "missing eigenvariable name");
    FreeNames names;
    collect_names(d.conclusion, names);
    const auto& pool = world ? names.world_free : names.term_vars;
    if (pool.count(d.fresh)) return fail(CheckReason::FreshnessViolated, "eigenvariable " + d.fresh + " is not fresh");
    return std::nullopt;
  }

  static std::optional<Failure> witness(const Derivation& d, bool world) {
    if (world) {
      const auto* w = std::get_if<WorldExpr>(&d.witness);
      if (!w) return fail(CheckReason::BadWitness, "expected a world witness");
      if (w->has_metas() || w->has_bound()) return fail(CheckReason::BadWitness, "witness is not closed");
    } else {
      const auto* t = std::get_if<Term>(&d.witness);
      if (!t) return fail(CheckReason::BadWitness, "expected a term witness");
      if (t->has_metas() || t->has_bound()) return fail(CheckReason::BadWitness, "witness is not closed");
    }
    return std::nullopt;
  }

  static Formula instantiate_fresh(const Formula& binder, const std::string& name) {
    return is_world_binder(binder.conn()) ? binder.instantiate(WorldExpr::free(name))
                                          : binder.instantiate(Term::var(name));
  }

  static Formula instantiate_witness(const Formula& binder, const Witness& w) {
    if (is_world_binder(binder.conn())) return binder.instantiate(std::get<WorldExpr>(w));
    return binder.instantiate(std::get<Term>(w));
  }

  std::optional<Failure> node(const Derivation& d) {
    const Sequent& s = d.conclusion;
    for (const auto& j : s.gamma)
      if (auto f = unresolved(j)) return f;
    for (const auto& j : s.delta)
      if (auto f = unresolved(j)) return f;
    if (auto f = unresolved(s.goal)) return f;

    std::vector<Sequent> want;
    auto with_delta = [&](Delta delta, Judgement goal) { want.push_back(Sequent{s.gamma, std::move(delta), std::move(goal)}); };
    const Formula& g = s.goal.formula;
    const WorldExpr& gw = s.goal.world;
    auto hyp = [&]() -> const Judgement& { return s.delta[d.principal]; };

    switch (d.rule) {
      case Rule::Init: {
        if (s.delta.size() != 1) return fail(CheckReason::ContextMismatch, "init needs exactly one linear hypothesis");
        if (g.conn() != Conn::Atom) return fail(CheckReason::FormulaMismatch, "init goal is not atomic");
        if (s.delta[0].formula != g) return fail(CheckReason::FormulaMismatch, "hypothesis differs from goal");
        if (s.delta[0].world != gw) return fail(CheckReason::WorldMismatch, "hypothesis world differs from goal world");
        break;
      }
      case Rule::Copy: {
        if (d.principal < 0 || d.principal >= static_cast<int>(s.gamma.size()))
          return fail(CheckReason::BadPrincipal, "copy index out of range");
        Delta delta = s.delta;
        delta.push_back(s.gamma[d.principal]);
        with_delta(delta, s.goal);
        break;
      }
      case Rule::TensorR: {
        if (auto f = goal_is(d, Conn::Tensor)) return f;
        Delta a, b;
        if (auto f = partition(d, -1, a, b)) return f;
        with_delta(a, Judgement{g.left(), gw});
        with_delta(b, Judgement{g.right(), gw});
        break;
      }
      case Rule::TensorL: {
        if (auto f = principal(d, Conn::Tensor)) return f;
        Delta delta = without(s.delta, d.principal);
        delta.push_back(Judgement{hyp().formula.left(), hyp().world});
        delta.push_back(Judgement{hyp().formula.right(), hyp().world});
        with_delta(delta, s.goal);
        break;
      }
      case Rule::OneR:
        if (auto f = goal_is(d, Conn::One)) return f;
        if (!s.delta.empty()) return fail(CheckReason::NonEmptyContext, "oneR needs an empty linear zone");
        break;
      case Rule::OneL:
        if (auto f = principal(d, Conn::One)) return f;
        with_delta(without(s.delta, d.principal), s.goal);
        break;
      case Rule::LimpR: {
        if (auto f = goal_is(d, Conn::Limp)) return f;
        Delta delta = s.delta;
        delta.push_back(Judgement{g.left(), gw});
        with_delta(delta, Judgement{g.right(), gw});
        break;
      }
      case Rule::LimpL: {
        if (auto f = principal(d, Conn::Limp)) return f;
        Delta a, b;
        if (auto f = partition(d, d.principal, a, b)) return f;
        b.push_back(Judgement{hyp().formula.right(), hyp().world});
        with_delta(a, Judgement{hyp().formula.left(), hyp().world});
        with_delta(b, s.goal);
        break;
      }
      case Rule::TopR:
        if (auto f = goal_is(d, Conn::Top)) return f;
        break;
      case Rule::ZeroL:
        if (auto f = principal(d, Conn::Zero)) return f;
        break;
      case Rule::WithR:
        if (auto f = goal_is(d, Conn::With)) return f;
        with_delta(s.delta, Judgement{g.left(), gw});
        with_delta(s.delta, Judgement{g.right(), gw});
        break;
      case Rule::WithL1:
      case Rule::WithL2: {
        if (auto f = principal(d, Conn::With)) return f;
        Delta delta = without(s.delta, d.principal);
        const Formula& h = hyp().formula;
        delta.push_back(Judgement{d.rule == Rule::WithL1 ? h.left() : h.right(), hyp().world});
        with_delta(delta, s.goal);
        break;
      }
      case Rule::OplusR1:
      case Rule::OplusR2:
        if (auto f = goal_is(d, Conn::Oplus)) return f;
        with_delta(s.delta, Judgement{d.rule == Rule::OplusR1 ? g.left() : g.right(), gw});
        break;
      case Rule::OplusL: {
        if (auto f = principal(d, Conn::Oplus)) return f;
        Delta base = without(s.delta, d.principal);
        Delta a = base, b = base;
        a.push_back(Judgement{hyp().formula.left(), hyp().world});
        b.push_back(Judgement{hyp().formula.right(), hyp().world});
        with_delta(a, s.goal);
        with_delta(b, s.goal);
        break;
      }
      case Rule::ForallR:
      case Rule::ExistsR: {
        bool universal = d.rule == Rule::ForallR;
        if (!is_quantifier(g.conn(), universal))
          return fail(CheckReason::FormulaMismatch, std::string("goal is not ") + (universal ? "universal" : "existential"));
        bool world = is_world_binder(g.conn());
        if (universal) {
          if (auto f = freshness(d, world)) return f;
          with_delta(s.delta, Judgement{instantiate_fresh(g, d.fresh), gw});
        } else {
          if (auto f = witness(d, world)) return f;
          with_delta(s.delta, Judgement{instantiate_witness(g, d.witness), gw});
        }
        break;
      }
      case Rule::ForallL:
      case Rule::ExistsL: {
        bool universal = d.rule == Rule::ForallL;
        const auto& delta0 = s.delta;
        if (d.principal < 0 || d.principal >= static_cast<int>(delta0.size()))
          return fail(CheckReason::BadPrincipal, "principal index out of range");
        const Formula& h = hyp().formula;
        if (!is_quantifier(h.conn(), universal))
          return fail(CheckReason::BadPrincipal, std::string("principal is not ") + (universal ? "universal" : "existential"));
        bool world = is_world_binder(h.conn());
        Delta delta = without(s.delta, d.principal);
        if (universal) {
          if (auto f = witness(d, world)) return f;
          delta.push_back(Judgement{instantiate_witness(h, d.witness), hyp().world});
        } else {
          if (auto f = freshness(d, world)) return f;
          delta.push_back(Judgement{instantiate_fresh(h, d.fresh), hyp().world});
        }
        with_delta(delta, s.goal);
        break;
      }
      case Rule::BangR:
        if (auto f = goal_is(d, Conn::Bang)) return f;
        if (!s.delta.empty()) return fail(CheckReason::NonEmptyContext, "bangR needs an empty linear zone");
        with_delta({}, Judgement{g.body(), gw});
        break;
      case Rule::BangL: {
        if (auto f = principal(d, Conn::Bang)) return f;
        Sequent p{s.gamma, without(s.delta, d.principal), s.goal};
        p.gamma.push_back(Judgement{hyp().formula.body(), hyp().world});
        want.push_back(std::move(p));
        break;
      }
      case Rule::AtR:
        if (auto f = goal_is(d, Conn::At)) return f;
        with_delta(s.delta, Judgement{g.body(), g.world()});
        break;
      case Rule::AtL: {
        if (auto f = principal(d, Conn::At)) return f;
        Delta delta = without(s.delta, d.principal);
        delta.push_back(Judgement{hyp().formula.body(), hyp().formula.world()});
        with_delta(delta, s.goal);
        break;
      }
      case Rule::DownR:
        if (auto f = goal_is(d, Conn::Down)) return f;
        with_delta(s.delta, Judgement{g.instantiate(gw), gw});
        break;
      case Rule::DownL: {
        if (auto f = principal(d, Conn::Down)) return f;
        Delta delta = without(s.delta, d.principal);
        delta.push_back(Judgement{hyp().formula.instantiate(hyp().world), hyp().world});
        with_delta(delta, s.goal);
        break;
      }
      case Rule::Cut: {
        if (!allow_cut_) return fail(CheckReason::CutDisallowed, "cut is not enabled for this certificate");
        if (!d.cut) return fail(CheckReason::FormulaMismatch, "cut without a cut formula");
        if (auto f = unresolved(*d.cut)) return f;
        if (d.cut_kind == 1) {
          Delta a, b;
          if (auto f = partition(d, -1, a, b)) return f;
          b.push_back(*d.cut);
          with_delta(a, *d.cut);
          with_delta(b, s.goal);
        } else if (d.cut_kind == 2) {
          if (!d.split.empty()) return fail(CheckReason::BadSplit, "unrestricted cut takes no split");
          with_delta({}, *d.cut);
          Sequent p = s;
          p.gamma.push_back(*d.cut);
          want.push_back(std::move(p));
        } else {
          return fail(CheckReason::BadSplit, "unknown cut kind");
        }
        break;
      }
    }

    if (d.premises.size() != want.size())
      return fail(CheckReason::WrongPremiseCount, std::string(rule_name(d.rule)) + " expects " +
                                                      std::to_string(want.size()) + " premises, got " +
                                                      std::to_string(d.premises.size()));
    for (std::size_t i = 0; i < want.size(); ++i)
      if (auto f = expect(d.premises[i], want[i], i)) return f;
    return std::nullopt;
  }
};

void census(const Derivation& d, std::vector<std::size_t>& out) {
  ++out[static_cast<std::size_t>(d.rule)];
  for (const auto& p : d.premises) census(p, out);
}

}  // namespace

const char* rule_name(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_name(const std::string& s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> v;
    for (std::size_t i = 0; i < kRuleNames.size(); ++i) v.push_back(static_cast<Rule>(i));
    return v;
  }();
  return rules;
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

const char* to_string(CheckReason r) {
  switch (r) {
    case CheckReason::BadPrincipal: return "BadPrincipal";
    case CheckReason::FormulaMismatch: return "FormulaMismatch";
    case CheckReason::WorldMismatch: return "WorldMismatch";
    case CheckReason::ContextMismatch: return "ContextMismatch";
    case CheckReason::BadSplit: return "BadSplit";
    case CheckReason::FreshnessViolated: return "FreshnessViolated";
    case CheckReason::BadWitness: return "BadWitness";
    case CheckReason::WrongPremiseCount: return "WrongPremiseCount";
    case CheckReason::NonEmptyContext: return "NonEmptyContext";
    case CheckReason::CutDisallowed: return "CutDisallowed";
    case CheckReason::UnresolvedMetavariable: return "UnresolvedMetavariable";
    case CheckReason::UnresolvedSlot: return "UnresolvedSlot";
  }
  return "?";
}

std::string to_string(const CheckError& e) {
  std::string p = "[";
  for (std::size_t i = 0; i < e.path.size(); ++i) p += (i ? "," : "") + std::to_string(e.path[i]);
  p += "]";
  return std::string(to_string(e.reason)) + " at " + p + ": " + e.detail;
}

std::optional<CheckError> check_derivation(const Derivation& d, bool allow_cut) {
  return Checker(allow_cut).run(d);
}

std::vector<std::size_t> rule_census(const Derivation& d) {
  std::vector<std::size_t> out(kRuleNames.size(), 0);
  census(d, out);
  return out;
}

}  // namespace hyll
