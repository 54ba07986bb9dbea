#include <sstream>

#include "hyll/biomodel.hpp"
#include "hyll/derived.hpp"

namespace hyll {

namespace {

bool lhs_present(const BioRule& r) { return r.effect != Effect::StrongEffect; }

// Sign of b in the conclusion.
bool rhs_present(const BioRule& r) { return (r.polarity == Polarity::Activation) == lhs_present(r); }

Literal trigger(const BioRule& r) { return {r.a, lhs_present(r)}; }
Literal target(const BioRule& r) { return {r.b, rhs_present(r)}; }
Literal flip(Literal l) {
  l.present = !l.present;
  return l;
}

std::vector<std::string> untouched(const BioRule& r, const std::vector<std::string>& vars) {
  std::vector<std::string> out;
  for (const auto& v : vars)
    if (v != r.a && v != r.b) out.push_back(v);
  return out;
}

// The two literals a strong or loop premise requires.
std::pair<Literal, Literal> premise_pair(const BioRule& r) {
  Literal cb = target(r);
  return {trigger(r), r.strength == Strength::Loop ? cb : flip(cb)};
}

bool paired(const BioRule& r) { return r.strength == Strength::Strong || r.strength == Strength::Loop; }

}  // namespace

Formula pres(const std::string& x) { return Formula::atom("pres", {Term::constant(x)}); }
Formula abs_(const std::string& x) { return Formula::atom("abs", {Term::constant(x)}); }
Formula literal(const Literal& l) { return l.present ? pres(l.var) : abs_(l.var); }

Formula dont_care(const std::string& x) { return Formula::oplus(pres(x), abs_(x)); }

Formula dont_cares(const std::vector<std::string>& xs) {
  std::vector<Formula> fs;
  for (const auto& x : xs) fs.push_back(dont_care(x));
  return tensor_all(fs);
}

Formula unchanged(const std::string& x, const WorldExpr& w) {
  WorldExpr next = compose(w, WorldExpr::nat(1));
  auto keep = [&](const Formula& f) { return Formula::limp(Formula::at(f, w), Formula::at(f, next)); };
  return Formula::bang(Formula::with(keep(pres(x)), keep(abs_(x))));
}

Formula unchanged(const std::vector<std::string>& xs, const WorldExpr& w) {
  std::vector<Formula> fs;
  for (const auto& x : xs) fs.push_back(unchanged(x, w));
  return tensor_all(fs);
}

Formula well_defined0() {
  Formula pa = Formula::atom("pres", {Term::var("a")});
  Formula aa = Formula::atom("abs", {Term::var("a")});
  return Formula::bind_term(Conn::ForallT, "a", "a", Formula::limp(Formula::tensor(pa, aa), Formula::zero()));
}

Formula well_defined1() {
  Formula pa = Formula::atom("pres", {Term::var("a")});
  Formula aa = Formula::atom("abs", {Term::var("a")});
  return Formula::bind_term(Conn::ForallT, "a", "a", Formula::oplus(pa, aa));
}

Formula rule_premise(const BioRule& r) {
  Formula t = literal(trigger(r));
  if (r.strength == Strength::Weak) return t;
  if (paired(r)) {
    auto [x, y] = premise_pair(r);
    return Formula::tensor(literal(x), literal(y));
  }
  return oplus_all({t, Formula::tensor(t, pres(r.b)), Formula::tensor(t, abs_(r.b))});
}

Formula rule_conclusion(const BioRule& r) {
  Formula a = r.effect == Effect::Consume ? abs_(r.a) : literal(trigger(r));
  return Formula::tensor(a, literal(target(r)));
}

Formula compile_rule(const BioRule& r, const std::vector<std::string>& vars) {
  Formula frame = Formula::binder(Conn::Down, "u", unchanged(untouched(r, vars), WorldExpr::bound(0)));
  Formula step = Formula::tensor(delay(WorldExpr::nat(1), rule_conclusion(r)), frame);
  return Formula::limp(rule_premise(r), step);
}

FireablePair gen_fireable(const BioRule& r, const std::vector<std::string>& vars) {
  std::vector<std::string> rest = untouched(r, vars);
  FireablePair out;
  if (paired(r)) {
    auto [x, y] = premise_pair(r);
    out.fireable = tensor_all({literal(x), literal(y), dont_cares(rest)});
    Formula wrong = oplus_all({Formula::tensor(literal(flip(x)), literal(y)),
                               Formula::tensor(literal(x), literal(flip(y))),
                               Formula::tensor(literal(flip(x)), literal(flip(y)))});
    out.not_fireable = Formula::tensor(wrong, dont_cares(rest));
  } else {
    out.fireable = Formula::tensor(rule_premise(r), dont_cares(rest));
    std::vector<std::string> others;
    for (const auto& v : vars)
      if (v == r.b && v != r.a) others.push_back(v);
    others.insert(others.end(), rest.begin(), rest.end());
    out.not_fireable = Formula::tensor(literal(flip(trigger(r))), dont_cares(others));
  }
  return out;
}

CompiledModel compile_system(const BioModel& m) {
  validate_model(m);
  CompiledModel c;
  bool all_strong = !m.rules.empty();
  for (const auto& r : m.rules) all_strong = all_strong && r.strength == Strength::Strong;
  c.prefix = all_strong ? "s_" : "";
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    c.rules.push_back(compile_rule(m.rules[i], m.vars));
    c.fireable.push_back(gen_fireable(m.rules[i], m.vars));
    c.gamma.push_back({dagger(c.rules.back()), WorldExpr::nat(0)});
    c.gamma_labels.push_back("rule" + std::to_string(i + 1));
  }
  c.gamma.push_back({dagger(well_defined0()), WorldExpr::nat(0)});
  c.gamma_labels.push_back("wd0");
  c.gamma.push_back({dagger(well_defined1()), WorldExpr::nat(0)});
  c.gamma_labels.push_back("wd1");
  std::vector<Formula> init;
  for (const auto& l : m.initial) init.push_back(literal(l));
  c.initial = {tensor_all(init), WorldExpr::nat(0)};
  return c;
}

std::string dump_compiled(const BioModel& m, const CompiledModel& c) {
  std::ostringstream os;
  WorldExpr w = WorldExpr::free("w");
  for (const auto& x : m.vars) os << "unchanged(" << x << ", w) := " << to_string(unchanged(x, w)) << "\n";
  for (const auto& x : m.vars) os << "dont_care(" << x << ") := " << to_string(dont_care(x)) << "\n";
  for (std::size_t i = 0; i < c.rules.size(); ++i)
    os << c.prefix << "rule" << i + 1 << " := " << to_string(c.rules[i]) << "\n";
  os << "well_defined0 := " << to_string(well_defined0()) << "\n";
  os << "well_defined1 := " << to_string(well_defined1()) << "\n";
  for (std::size_t i = 0; i < c.fireable.size(); ++i) {
    os << c.prefix << "fireable" << i + 1 << " := " << to_string(c.fireable[i].fireable) << "\n";
    os << c.prefix << "not_fireable" << i + 1 << " := " << to_string(c.fireable[i].not_fireable) << "\n";
  }
  os << "initial_state := " << to_string(c.initial.formula) << "\n";
  for (std::size_t i = 0; i < c.gamma.size(); ++i)
    os << "axiom " << c.gamma_labels[i] << ": " << to_string(c.gamma[i]) << "\n";
  os << "initial: " << to_string(c.initial) << "\n";
  return os.str();
}

}  // namespace hyll
