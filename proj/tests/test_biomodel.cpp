#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hyll/biomodel.hpp"
#include "hyll/derived.hpp"
#include "hyll/kernel.hpp"
#include "hyll/parser.hpp"

using namespace hyll;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(HYLL_SOURCE_DIR) + "/" + rel, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BioModel p53() { return parse_model(slurp("data/p53.bio")); }
BioModel p53_strong() { return parse_model(slurp("data/p53_strong.bio")); }

Formula F(const std::string& s) { return parse_formula(s, ParseContext{}); }

// "name := formula" lines, comments and other lines skipped.
std::map<std::string, std::string> definitions(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto k = line.find(" := ");
    if (k == std::string::npos || line.rfind("--", 0) == 0) continue;
    out[line.substr(0, k)] = line.substr(k + 4);
  }
  return out;
}

int parse_error_line(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("model accepted: " << text);
  return 0;
}

// Classical reading of a state formula under a total assignment.
bool eval(const Formula& f, const std::vector<std::string>& vars, BoolState s) {
  switch (f.conn()) {
    case Conn::One:
    case Conn::Top: return true;
    case Conn::Zero: return false;
    case Conn::Tensor:
    case Conn::With: return eval(f.left(), vars, s) && eval(f.right(), vars, s);
    case Conn::Oplus: return eval(f.left(), vars, s) || eval(f.right(), vars, s);
    case Conn::Atom: {
      std::string x = f.args().at(0).to_string();
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == x) return (((s >> i) & 1u) != 0) == (f.name() == "pres");
      FAIL("unknown entity " << x);
      return false;
    }
    default: FAIL("not a state formula: " << to_string(f)); return false;
  }
}

BioModel random_model(std::mt19937& rng) {
  BioModel m;
  int n = 2 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) m.vars.push_back("x" + std::to_string(i));
  int k = 1 + static_cast<int>(rng() % 6);
  for (int i = 0; i < k; ++i) {
    BioRule r;
    r.a = m.vars[rng() % n];
    do r.b = m.vars[rng() % n];
    while (r.b == r.a);
    r.polarity = rng() % 2 ? Polarity::Activation : Polarity::Inhibition;
    r.strength = static_cast<Strength>(rng() % 4);
    r.effect = static_cast<Effect>(rng() % 3);
    if (r.effect == Effect::StrongEffect && r.strength == Strength::Loop) r.effect = Effect::Plain;
    m.rules.push_back(r);
  }
  return m;
}

}  // namespace

TEST_CASE("the shipped model file parses to the six rules") {
  BioModel expect;
  expect.vars = {"p53", "Mdm2", "DNAdam"};
  auto rule = [](Polarity p, Effect e, const char* a, const char* b) {
    BioRule r;
    r.polarity = p;
    r.effect = e;
    r.a = a;
    r.b = b;
    return r;
  };
  using P = Polarity;
  using E = Effect;
  expect.rules = {rule(P::Inhibition, E::Plain, "DNAdam", "Mdm2"),  rule(P::Inhibition, E::StrongEffect, "Mdm2", "p53"),
                  rule(P::Activation, E::Plain, "p53", "Mdm2"),     rule(P::Inhibition, E::Plain, "Mdm2", "p53"),
                  rule(P::Inhibition, E::Consume, "p53", "DNAdam"), rule(P::Inhibition, E::StrongEffect, "DNAdam", "Mdm2")};
  expect.initial = {{"p53", false}, {"Mdm2", true}};
  CHECK(p53() == expect);
  CHECK(p53().rules[4].line == 8);

  BioModel strong = p53_strong();
  for (auto& r : expect.rules) r.strength = Strength::Strong;
  CHECK(strong == expect);
}

TEST_CASE("model syntax errors carry positions") {
  CHECK(parse_error_line("vars a b a;") == 1);
  CHECK(parse_error_line("vars a b;\nrule general: a => !c;") == 2);
  CHECK(parse_error_line("vars a b;\n\nrule general: a => !a;") == 3);
  CHECK(parse_error_line("vars a b;\ninit a !b;\ninit a;") == 3);
  CHECK(parse_error_line("vars a b;\ninit a !a;") == 2);
  CHECK(parse_error_line("vars a b;\nrule consume: !a => b;") == 2);
  CHECK(parse_error_line("vars a b;\nrule strong-effect: a => b;") == 2);
  CHECK(parse_error_line("vars a b;\nrule fast: a => b;") == 2);
  CHECK(parse_error_line("vars a b;\nrule weak strong: a => b;") == 2);
  CHECK(parse_error_line("vars a b;\nrule general: a -> b;") == 2);
  CHECK(parse_error_line("rule general: a => b;") == 1);
  CHECK(parse_error_line("-- nothing") == 1);
  CHECK_THROWS_AS(parse_model("vars a b; rule general: a => b; vars c;"), ParseError);
}

TEST_CASE("modifier spellings") {
  BioModel m = parse_model(
      "vars a b;\n"
      "rule weak: a => b;\n"
      "rule loop consume: a => !b;\n"
      "rule strong strong-effect: !a => !b;\n"
      "rule: a =>c b;\n"
      "init;");
  REQUIRE(m.rules.size() == 4);
  CHECK(m.rules[0].strength == Strength::Weak);
  CHECK(m.rules[1].strength == Strength::Loop);
  CHECK(m.rules[1].effect == Effect::Consume);
  CHECK(m.rules[1].polarity == Polarity::Inhibition);
  CHECK(m.rules[2].strength == Strength::Strong);
  CHECK(m.rules[2].effect == Effect::StrongEffect);
  CHECK(m.rules[2].polarity == Polarity::Activation);
  CHECK(m.rules[3].strength == Strength::General);
  CHECK(m.rules[3].effect == Effect::Consume);
  CHECK(m.initial.empty());
}

TEST_CASE("rule notation round-trips through the parser") {
  std::mt19937 rng(91);
  for (int i = 0; i < 200; ++i) {
    BioModel m = random_model(rng);
    std::string text = "vars";
    for (const auto& v : m.vars) text += " " + v;
    text += ";\n";
    for (const auto& r : m.rules) text += rule_notation(r) + "\n";
    INFO(text);
    BioModel back = parse_model(text);
    CHECK(back.rules == m.rules);
  }
}

TEST_CASE("validation rejects malformed models") {
  BioModel m = p53();
  m.rules[0].b = "Mdm3";
  CHECK_THROWS_AS(validate_model(m), Error);
  m = p53();
  m.rules[0].b = m.rules[0].a;
  CHECK_THROWS_AS(validate_model(m), Error);
  m = p53();
  m.initial.push_back({"p53", true});
  CHECK_THROWS_AS(validate_model(m), Error);
  m = p53();
  m.vars.push_back("p53");
  CHECK_THROWS_AS(compile_system(m), Error);
  CHECK_THROWS_AS(validate_model(BioModel{}), Error);
}

TEST_CASE("support definitions") {
  CHECK(dont_care("p53") == F("pres(p53) + abs(p53)"));
  CHECK(dont_cares({}) == F("1"));
  CHECK(dont_cares({"a", "b"}) == F("(pres(a) + abs(a)) * (pres(b) + abs(b))"));
  CHECK(unchanged("p53", WorldExpr::free("w")) ==
        F("!((pres(p53) @@ w -o pres(p53) @@ w.1) & (abs(p53) @@ w -o abs(p53) @@ w.1))"));
  CHECK(unchanged(std::vector<std::string>{"p53"}, WorldExpr::free("w")) == unchanged("p53", WorldExpr::free("w")));
  CHECK(unchanged(std::vector<std::string>{}, WorldExpr::nat(3)) == F("1"));
  CHECK(well_defined0() == F("all x. (pres(x) * abs(x) -o 0)"));
  CHECK(well_defined1() == F("all x. (pres(x) + abs(x))"));
}

TEST_CASE("rule templates per strength and effect") {
  BioRule r;
  r.a = "a";
  r.b = "b";
  std::vector<std::string> vars = {"a", "b", "c"};
  std::string frame = "(dn u. !((pres(c) @@ u -o pres(c) @@ u.1) & (abs(c) @@ u -o abs(c) @@ u.1)))";

  r.strength = Strength::Weak;
  CHECK(compile_rule(r, vars) == F("pres(a) -o (dn u. (pres(a) * pres(b)) @@ u.1) * " + frame));
  r.strength = Strength::Loop;
  r.polarity = Polarity::Inhibition;
  CHECK(compile_rule(r, vars) == F("pres(a) * abs(b) -o (dn u. (pres(a) * abs(b)) @@ u.1) * " + frame));
  r.strength = Strength::Strong;
  r.effect = Effect::Consume;
  CHECK(compile_rule(r, vars) == F("pres(a) * pres(b) -o (dn u. (abs(a) * abs(b)) @@ u.1) * " + frame));
  r.strength = Strength::General;
  r.polarity = Polarity::Activation;
  r.effect = Effect::StrongEffect;
  CHECK(compile_rule(r, vars) ==
        F("abs(a) + abs(a) * pres(b) + abs(a) * abs(b) -o (dn u. (abs(a) * abs(b)) @@ u.1) * " + frame));
  CHECK(compile_rule(r, {"a", "b"}) == F("abs(a) + abs(a) * pres(b) + abs(a) * abs(b) -o (dn u. (abs(a) * abs(b)) @@ u.1) * (dn u. 1)"));
}

TEST_CASE("fireable pairs for degenerate variable sets") {
  BioRule r;
  r.a = "a";
  r.b = "b";
  r.strength = Strength::Weak;
  FireablePair p = gen_fireable(r, {"a"});
  CHECK(p.fireable == F("pres(a) * 1"));
  CHECK(p.not_fireable == F("abs(a) * 1"));
  r.strength = Strength::Strong;
  p = gen_fireable(r, {"a", "b"});
  CHECK(p.fireable == F("pres(a) * abs(b) * 1"));
  CHECK(p.not_fireable == F("(abs(a) * abs(b) + pres(a) * pres(b) + abs(a) * pres(b)) * 1"));
}

TEST_CASE("compiled definitions match the hand transcription") {
  struct Case {
    BioModel model;
    const char* transcribed;
  };
  for (const auto& c : {Case{p53(), "tests/golden/p53.transcribed"}, Case{p53_strong(), "tests/golden/p53_strong.transcribed"}}) {
    auto expect = definitions(slurp(c.transcribed));
    auto got = definitions(dump_compiled(c.model, compile_system(c.model)));
    REQUIRE(expect.size() >= 19);
    for (const auto& [name, text] : expect) {
      INFO(name);
      REQUIRE(got.count(name) == 1);
      CHECK(F(got[name]) == F(text));
    }
  }
}

TEST_CASE("compiled dump equals the checked-in goldens") {
  BioModel m = p53();
  CHECK(dump_compiled(m, compile_system(m)) == slurp("tests/golden/p53.compiled"));
  BioModel s = p53_strong();
  CHECK(dump_compiled(s, compile_system(s)) == slurp("tests/golden/p53_strong.compiled"));
}

TEST_CASE("system context layout") {
  BioModel m = p53();
  CompiledModel c = compile_system(m);
  CHECK(c.prefix.empty());
  REQUIRE(c.gamma.size() == 8);
  CHECK(c.gamma_labels == std::vector<std::string>{"rule1", "rule2", "rule3", "rule4", "rule5", "rule6", "wd0", "wd1"});
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(c.gamma[i].world == WorldExpr::nat(0));
    CHECK(c.gamma[i].formula == dagger(c.rules[i]));
  }
  CHECK(c.gamma[6].formula == dagger(well_defined0()));
  CHECK(c.initial.formula == F("abs(p53) * pres(Mdm2)"));
  CHECK(c.initial.world == WorldExpr::nat(0));
  CHECK(compile_system(p53_strong()).prefix == "s_");

  BioModel empty = parse_model("vars a; init;");
  CompiledModel e = compile_system(empty);
  CHECK(e.gamma.size() == 2);
  CHECK(e.gamma_labels == std::vector<std::string>{"wd0", "wd1"});
  CHECK(e.initial.formula == F("1"));
}

TEST_CASE("identity expansion of every system axiom is accepted") {
  // Sizes frozen from the first accepted run.
  const std::vector<std::size_t> general = {55, 55, 55, 55, 55, 55, 13, 11};
  const std::vector<std::size_t> strong = {44, 44, 44, 44, 44, 44, 13, 11};
  for (const auto& [m, sizes] : {std::pair{p53(), general}, std::pair{p53_strong(), strong}}) {
    CompiledModel c = compile_system(m);
    std::vector<std::size_t> got;
    for (const auto& j : c.gamma) {
      Derivation d = identity_expansion(j.formula, j.world);
      auto err = check_derivation(d, false);
      CHECK_FALSE(err.has_value());
      got.push_back(d.size());
    }
    std::string shown;
    for (auto n : got) shown += std::to_string(n) + " ";
    INFO(shown);
    CHECK(got == sizes);
  }
}

TEST_CASE("oracle transition system") {
  BioModel m = p53();
  TransitionSystem ts = oracle_transitions(m);
  CHECK(ts.state_count() == 8);
  const auto& v = m.vars;
  BoolState state0_dam = parse_state("!p53 Mdm2 DNAdam", v);
  auto state1 = parse_state_predicate("p53 !Mdm2", v);
  auto path = oracle_reach(ts, state0_dam, state1, 2);
  REQUIRE(path);
  CHECK(*path == std::vector<int>{1, 2});
  CHECK_FALSE(oracle_reach(ts, state0_dam, state1, 1));

  BoolState quiet = parse_state("!p53 Mdm2 !DNAdam", v);
  CHECK(is_fixpoint(ts, quiet));
  std::vector<int> rules;
  for (const Edge& e : ts.edges[quiet]) rules.push_back(e.rule);
  CHECK(rules == std::vector<int>{4, 6});

  // Damage is repaired: reach state0 without damage in four steps.
  auto repaired = parse_state_predicate("!p53 Mdm2 !DNAdam", v);
  auto shortest = oracle_reach(ts, state0_dam, repaired, 10);
  REQUIRE(shortest);
  CHECK(shortest->size() == 4);
  CHECK(follow_path(ts, state0_dam, {1, 2, 5, 6}) == quiet);
  CHECK(follow_path(ts, state0_dam, {1, 2, 3, 4}) == state0_dam);
  CHECK_FALSE(follow_path(ts, quiet, {1}));

  CHECK(state_to_string(quiet, v) == "!p53 Mdm2 !DNAdam");
  CHECK_THROWS_AS(parse_state("p53 Mdm2", v), Error);
  CHECK_THROWS_AS(parse_state("p53 Mdm2 DNAdam Foo", v), Error);
  CHECK(parse_state_predicate("", v)(quiet));
}

TEST_CASE("strong rules never link two balanced states") {
  BioModel m = p53_strong();
  TransitionSystem ts = oracle_transitions(m);
  auto balanced = [&](BoolState s) { return ((s >> 0) & 1u) == ((s >> 1) & 1u); };
  int checked = 0;
  for (BoolState s = 0; s < ts.state_count(); ++s) {
    if (!balanced(s)) continue;
    for (const Edge& e : ts.edges[s]) {
      CHECK_FALSE(balanced(e.to));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("oracle size guard") {
  BioModel m;
  for (int i = 0; i < 21; ++i) m.vars.push_back("v" + std::to_string(i));
  CHECK_THROWS_AS(oracle_transitions(m), Error);
}

TEST_CASE("fireable and not_fireable are complementary and agree with the oracle") {
  std::mt19937 rng(17);
  std::vector<BioModel> models = {p53(), p53_strong()};
  for (int i = 0; i < 150; ++i) models.push_back(random_model(rng));
  for (const auto& m : models) {
    TransitionSystem ts = oracle_transitions(m);
    for (std::size_t r = 0; r < m.rules.size(); ++r) {
      FireablePair p = gen_fireable(m.rules[r], m.vars);
      for (BoolState s = 0; s < ts.state_count(); ++s) {
        bool edge = false;
        for (const Edge& e : ts.edges[s]) edge = edge || e.rule == int(r + 1);
        bool fire = eval(p.fireable, m.vars, s);
        bool idle = eval(p.not_fireable, m.vars, s);
        INFO(rule_notation(m.rules[r]) << " at " << state_to_string(s, m.vars));
        CHECK(fire == edge);
        CHECK(fire != idle);
      }
    }
  }
}
