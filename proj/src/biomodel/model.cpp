#include <set>

#include "hyll/biomodel.hpp"
#include "hyll/parser.hpp"

namespace hyll {

bool operator==(const BioRule& x, const BioRule& y) {
  return x.polarity == y.polarity && x.strength == y.strength && x.effect == y.effect && x.a == y.a && x.b == y.b;
}

bool operator==(const BioModel& x, const BioModel& y) {
  if (x.vars != y.vars || x.rules != y.rules || x.initial.size() != y.initial.size()) return false;
  for (std::size_t i = 0; i < x.initial.size(); ++i)
    if (x.initial[i].var != y.initial[i].var || x.initial[i].present != y.initial[i].present) return false;
  return true;
}

namespace {

struct Lit {
  Literal lit;
  Token at;
};

class ModelParser {
 public:
  explicit ModelParser(const std::string& text) : ts_(tokenize(text)) {}

  BioModel run() {
    while (!ts_.at_end()) {
      const Token& t = ts_.peek();
      if (ts_.is_ident("vars")) {
        vars();
      } else if (ts_.is_ident("rule")) {
        rule();
      } else if (ts_.is_ident("init")) {
        init();
      } else {
        ts_.fail({"vars", "rule", "init"}, "unexpected '" + t.text + "'");
      }
    }
    if (m_.vars.empty()) throw ParseError(ts_.peek().line, ts_.peek().col, {"vars"}, "model declares no variables");
    return m_;
  }

 private:
  TokenStream ts_;
  BioModel m_;
  bool seen_init_ = false;

  [[noreturn]] static void at(const Token& t, const std::string& msg) { throw ParseError(t.line, t.col, {}, msg); }

  Token ident(const std::string& what) {
    if (ts_.peek().kind != TokKind::Ident) ts_.fail({what}, "expected " + what);
    return ts_.next();
  }

  void known(const Token& t) {
    for (const auto& v : m_.vars)
      if (v == t.text) return;
    at(t, "unknown entity '" + t.text + "'");
  }

  Lit lit() {
    bool neg = ts_.accept("!");
    Token t = ident("entity");
    known(t);
    return {{t.text, !neg}, t};
  }

  void vars() {
    ts_.next();
    if (!m_.rules.empty()) at(ts_.peek(), "variables must be declared before rules");
    do {
      Token t = ident("entity");
      for (const auto& v : m_.vars)
        if (v == t.text) at(t, "duplicate variable '" + t.text + "'");
      m_.vars.push_back(t.text);
    } while (ts_.peek().kind == TokKind::Ident);
    ts_.expect(";");
  }

  void rule() {
    Token kw = ts_.next();
    BioRule r;
    r.line = kw.line;
    bool consume = false, strong_effect = false, strength_set = false;
    while (!ts_.is(":")) {
      Token t = ident("modifier");
      auto set_strength = [&](Strength s) {
        if (strength_set) at(t, "rule strength given twice");
        strength_set = true;
        r.strength = s;
      };
      if (t.text == "general") set_strength(Strength::General);
      else if (t.text == "weak") set_strength(Strength::Weak);
      else if (t.text == "loop") set_strength(Strength::Loop);
      else if (t.text == "consume") consume = true;
      else if (t.text == "strong" && ts_.is("-")) {
        ts_.next();
        Token e = ident("effect");
        if (e.text != "effect") at(e, "expected 'strong-effect'");
        strong_effect = true;
      } else if (t.text == "strong") set_strength(Strength::Strong);
      else at(t, "unknown rule modifier '" + t.text + "'");
    }
    ts_.expect(":");
    Lit a = lit();
    if (ts_.accept("=>c")) consume = true;
    else ts_.expect("=>");
    Lit b = lit();
    ts_.expect(";");
    if (a.lit.var == b.lit.var) at(b.at, "a rule must relate two different entities");
    r.a = a.lit.var;
    r.b = b.lit.var;
    if (a.lit.present) {
      if (strong_effect) at(a.at, "strong-effect rules act through an absent premise ('!" + r.a + "')");
      r.polarity = b.lit.present ? Polarity::Activation : Polarity::Inhibition;
      r.effect = consume ? Effect::Consume : Effect::Plain;
    } else {
      if (consume) at(a.at, "consumption needs a present premise");
      r.polarity = b.lit.present ? Polarity::Inhibition : Polarity::Activation;
      r.effect = Effect::StrongEffect;
    }
    m_.rules.push_back(r);
  }

  void init() {
    Token kw = ts_.next();
    if (seen_init_) at(kw, "initial state given twice");
    seen_init_ = true;
    std::set<std::string> seen;
    while (!ts_.is(";")) {
      Lit l = lit();
      if (!seen.insert(l.lit.var).second) at(l.at, "'" + l.lit.var + "' appears twice in the initial state");
      m_.initial.push_back(l.lit);
    }
    ts_.expect(";");
  }
};

}  // namespace

BioModel parse_model(const std::string& text) {
  BioModel m = ModelParser(text).run();
  validate_model(m);
  return m;
}

void validate_model(const BioModel& m) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Model, msg); };
  if (m.vars.empty()) fail("model declares no variables");
  std::set<std::string> vs;
  for (const auto& v : m.vars)
    if (!vs.insert(v).second) fail("duplicate variable '" + v + "'");
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    const BioRule& r = m.rules[i];
    std::string where = "rule " + std::to_string(i + 1);
    if (!vs.count(r.a) || !vs.count(r.b)) fail(where + " names an unknown entity");
    if (r.a == r.b) fail(where + " relates an entity to itself");
    if (r.effect == Effect::StrongEffect && r.strength == Strength::Loop)
      fail(where + ": loop rules have no strong-effect form");
  }
  std::set<std::string> seen;
  for (const auto& l : m.initial) {
    if (!vs.count(l.var)) fail("initial state names unknown entity '" + l.var + "'");
    if (!seen.insert(l.var).second) fail("'" + l.var + "' appears twice in the initial state");
  }
}

std::string rule_notation(const BioRule& r) {
  std::string mods;
  switch (r.strength) {
    case Strength::General: mods = "general"; break;
    case Strength::Weak: mods = "weak"; break;
    case Strength::Strong: mods = "strong"; break;
    case Strength::Loop: mods = "loop"; break;
  }
  bool lhs = r.effect != Effect::StrongEffect;
  bool rhs = (r.polarity == Polarity::Activation) == lhs;
  std::string arrow = r.effect == Effect::Consume ? " =>c " : " => ";
  return "rule " + mods + ": " + (lhs ? "" : "!") + r.a + arrow + (rhs ? "" : "!") + r.b + ";";
}

}  // namespace hyll
