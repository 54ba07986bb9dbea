#include <random>

#include "doctest.h"
#include "hyll/derived.hpp"
#include "hyll/parser.hpp"

using namespace hyll;

namespace {

const ParseContext kCtx{};

Formula F(const std::string& s) { return parse_formula(s, kCtx); }

// Random closed-or-open formula built directly in nameless form.
struct Gen {
  std::mt19937 rng;
  std::vector<bool> scope;  // true for world binders, innermost last

  explicit Gen(unsigned seed) : rng(seed) {}

  int roll(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  Term term() {
    std::vector<std::uint32_t> tb;
    for (std::size_t k = 0; k < scope.size(); ++k)
      if (!scope[scope.size() - 1 - k]) tb.push_back(static_cast<std::uint32_t>(k));
    switch (roll(5)) {
      case 0: if (!tb.empty()) return Term::bound(tb[static_cast<std::size_t>(roll(static_cast<int>(tb.size())))]); [[fallthrough]];
      case 1: return Term::constant(roll(2) ? "a" : "b");
      case 2: return Term::var("y");
      case 3: return Term::meta("m");
      default: return Term::app("f", {Term::constant("c")});
    }
  }

  WorldExpr world() {
    std::vector<std::uint32_t> wb;
    for (std::size_t k = 0; k < scope.size(); ++k)
      if (scope[scope.size() - 1 - k]) wb.push_back(static_cast<std::uint32_t>(k));
    WorldExpr w = WorldExpr::nat(static_cast<std::uint64_t>(roll(3)));
    if (!wb.empty() && roll(2)) w = compose(w, WorldExpr::bound(wb[static_cast<std::size_t>(roll(static_cast<int>(wb.size())))]));
    if (roll(3) == 0) w = compose(w, WorldExpr::free("w"));
    if (roll(6) == 0) w = compose(w, WorldExpr::meta("k"));
    if (roll(8) == 0) w = saturating_sub(w, WorldExpr::free("v"));
    return w;
  }

  Formula formula(int depth) {
    int n = depth <= 0 ? 4 : 16;
    switch (roll(n)) {
      case 0: return Formula::atom("p");
      case 1: return Formula::atom("q", {term()});
      case 2: return Formula::atom("r", {term(), term()});
      case 3: {
        int k = roll(3);
        return k == 0 ? Formula::one() : k == 1 ? Formula::zero() : Formula::top();
      }
      case 4: return Formula::tensor(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::limp(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::with(formula(depth - 1), formula(depth - 1));
      case 7: return Formula::oplus(formula(depth - 1), formula(depth - 1));
      case 8: return Formula::bang(formula(depth - 1));
      case 9: return Formula::at(formula(depth - 1), world());
      default: {
        static const Conn cs[] = {Conn::ForallT, Conn::ExistsT, Conn::ForallW, Conn::ExistsW, Conn::Down};
        static const char* hints[] = {"x", "y", "u", "w", "a"};
        Conn c = cs[roll(5)];
        scope.push_back(is_world_binder(c));
        Formula body = formula(depth - 1);
        scope.pop_back();
        return Formula::binder(c, hints[roll(5)], body);
      }
    }
  }
};

}  // namespace

TEST_CASE("parse examples") {
  Formula act = F("pres(a) -o (pres(a) * pres(b))");
  REQUIRE(act.conn() == Conn::Limp);
  CHECK(act.left() == Formula::atom("pres", {Term::constant("a")}));
  CHECK(act.right().conn() == Conn::Tensor);
  CHECK(to_string(act) == "pres(a) -o pres(a) * pres(b)");

  Formula d = F("dn u. (A @@ u.1)");
  REQUIRE(d.conn() == Conn::Down);
  CHECK(d.body().conn() == Conn::At);
  CHECK(d.body().world() == compose(WorldExpr::bound(0), WorldExpr::nat(1)));

  CHECK(F("1").conn() == Conn::One);
  CHECK(to_string(Formula::one()) == "1");
}

TEST_CASE("precedence and associativity") {
  CHECK(F("a * b & c + d -o e") == F("(((a * b) & c) + d) -o e"));
  CHECK(F("a -o b -o c") == F("a -o (b -o c)"));
  CHECK(F("a * b * c") == F("a * (b * c)"));
  CHECK(F("!a * b") == F("(!a) * b"));
  CHECK(F("all x. q(x) * p") == F("all x. (q(x) * p)"));
  CHECK(to_string(F("(a -o b) -o c")) == "(a -o b) -o c");
  CHECK(to_string(F("(a * b) * c")) == "(a * b) * c");
}

TEST_CASE("syntax errors carry position and expected tokens") {
  try {
    F("p *\n  )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(F("p @@"), ParseError);
  CHECK_THROWS_AS(F("all . p"), ParseError);
  CHECK_THROWS_AS(F("p $ q"), ParseError);
  CHECK_THROWS_AS(F("allw u. q(u)"), ParseError);  // world variable inside a term
  CHECK_THROWS_AS(F("all x. (p @@ x)"), ParseError);
}

TEST_CASE("signature checking") {
  ParseContext ctx;
  ctx.signature = {{"pres", 1}, {"p", 0}};
  CHECK_NOTHROW(parse_formula("pres(a) * p", ctx));
  try {
    parse_formula("prez(a)", ctx);
    FAIL("undeclared predicate accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndeclaredPredicate);
  }
  try {
    parse_formula("pres(a, b)", ctx);
    FAIL("bad arity accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Arity);
  }
}

TEST_CASE("alpha equivalence") {
  CHECK(F("dn u. (P @@ u)") == F("dn v. (P @@ v)"));
  CHECK(F("P * Q") != F("Q * P"));
  CHECK(F("all x. ex y. r(x, y)") == F("all a. ex b. r(a, b)"));
  CHECK(F("all x. ex y. r(x, y)") != F("all x. ex y. r(y, x)"));
  CHECK(F("allw u. (p @@ u)") != F("dn u. (p @@ u)"));
}

TEST_CASE("substitution") {
  Formula down = F("dn u. (A @@ u)");
  CHECK(down.instantiate(WorldExpr::free("w")) == Formula::at(Formula::atom("A"), WorldExpr::free("w")));

  Formula p = F("p * q(a)");
  CHECK(substitute_world(p, WorldVar::free("w"), WorldExpr::nat(3)) == p);
  CHECK(substitute_term(p, TermKind::Var, "y", Term::constant("b")) == p);

  WorldExpr s = saturating_sub(WorldExpr::free("u"), WorldExpr::free("v"));
  Formula at = Formula::at(Formula::atom("p"), s);
  Formula g = substitute_world(substitute_world(at, WorldVar::free("v"), WorldExpr::nat(2)), WorldVar::free("u"),
                               WorldExpr::nat(5));
  CHECK(g.world() == WorldExpr::nat(3));

  // The replacement mentions a name that a binder also uses as its hint.
  Formula f = F("all x. r('y, x)");
  Formula sub = substitute_term(f, TermKind::Var, "y", Term::constant("x"));
  REQUIRE(sub.conn() == Conn::ForallT);
  CHECK(sub.body().args()[0] == Term::constant("x"));
  CHECK(sub.body().args()[1] == Term::bound(0));
  CHECK(to_string(sub) == "all x1. r(x,x1)");
  CHECK(F(to_string(sub)) == sub);

  Formula fw = F("dn u. (p @@ u.w)");
  Formula sw = substitute_world(fw, WorldVar::free("w"), WorldExpr::free("u"));
  CHECK(sw.body().world() == compose(WorldExpr::bound(0), WorldExpr::free("u")));
  CHECK(F(to_string(sw)) == sw);
}

TEST_CASE("derived connectives") {
  Formula P = Formula::atom("P");
  CHECK(to_string(delay(WorldExpr::nat(1), P)) == "dn u. (P @@ u.1)");
  CHECK(delay(WorldExpr::iota(), P) == F("dn u. (P @@ u)"));
  CHECK(dagger(P) == F("allw u. (P @@ u)"));
  CHECK(box(P) == F("dn u. allw w. (P @@ u.w)"));
  CHECK(diamond(P) == F("dn u. exw w. (P @@ u.w)"));
  Formula A = Formula::atom("A"), B = Formula::atom("B");
  WorldExpr u = WorldExpr::free("k"), v = WorldExpr::free("l");
  CHECK(oscillate1(A, B, u, v) == F("A & (dn z. ((B & dn y. (A @@ y.l)) @@ z.k)) & (A & B -o 0)"));
  CHECK(oscillate_h(A, B, u, v) ==
        F("(allw z. (((A -o dn a. (B @@ a.k)) & (B -o dn b. (A @@ b.l))) @@ z)) & (A & B -o 0)"));
  CHECK(F("delay(2) P") == delay(WorldExpr::nat(2), P));
  CHECK(F("box P") == box(P));
  CHECK(F("dag P") == dagger(P));
  CHECK(expand_derived("diamond", {P}, {}) == diamond(P));
  CHECK_THROWS_AS(expand_derived("nope", {P}, {}), Error);
  CHECK_THROWS_AS(expand_derived("delay", {P}, {}), Error);

  auto goals = oscillation_goals(A, B, u, v, WorldExpr::free("w"));
  REQUIRE(goals.size() == 3);
  CHECK(to_string(goals[0]) == ". ; A @ w |- B @ k.w");
  CHECK(to_string(goals[1]) == ". ; B @ k.w |- A @ k.l.w");
  CHECK(to_string(goals[2]) == ". ; . |- A & B -o 0 @ w");
}

TEST_CASE("folds") {
  CHECK(tensor_all({}) == Formula::one());
  CHECK(with_all({}) == Formula::top());
  CHECK(oplus_all({}) == Formula::zero());
  CHECK(tensor_all({F("a"), F("b"), F("c")}) == F("a * b * c"));
}

TEST_CASE("sequents") {
  ParseContext ctx;
  ctx.zone_aliases["sys"] = {parse_judgement("p @ 0", kCtx), parse_judgement("q(a) @ 0", kCtx)};
  Sequent s = parse_sequent("sys ; r(a,b) @ w.1, p @ w |- p * r(a,b) @ w.1", ctx);
  CHECK(s.gamma.size() == 2);
  CHECK(s.delta.size() == 2);
  CHECK(s.goal.world == parse_world("w.1"));
  Sequent e = parse_sequent(". ; . |- 1 @ 0", kCtx);
  CHECK(e.gamma.empty());
  CHECK(e.delta.empty());
  CHECK(to_string(e) == ". ; . |- 1 @ 0");
  CHECK(multiset_equal(parse_sequent(". ; a @ 0, b @ 0, a @ 0 |- p @ 0", kCtx).delta,
                       parse_sequent(". ; b @ 0, a @ 0, a @ 0 |- p @ 0", kCtx).delta));
  CHECK_FALSE(multiset_equal(parse_sequent(". ; a @ 0, b @ 0 |- p @ 0", kCtx).delta,
                             parse_sequent(". ; b @ 0, a @ 0, a @ 0 |- p @ 0", kCtx).delta));
  Sequent t = parse_sequent(to_string(s), kCtx);
  CHECK(to_string(t) == to_string(s));
}

TEST_CASE("property: parse inverts print") {
  Gen g(1234);
  for (int i = 0; i < 500; ++i) {
    Formula f = g.formula(8);
    std::string text = to_string(f);
    Formula back = F(text);
    CHECK_MESSAGE(back == f, text);
    CHECK(to_string(back) == text);
  }
}

TEST_CASE("property: substitution never changes binding structure") {
  Gen g(99);
  for (int i = 0; i < 300; ++i) {
    Formula f = g.formula(6);
    // Replacements that reuse every name a binder might print with.
    Formula a = substitute_term(f, TermKind::Var, "y", Term::app("g", {Term::constant("x"), Term::constant("u")}));
    Formula b = substitute_world(f, WorldVar::free("w"), compose(WorldExpr::free("u"), WorldExpr::free("x")));
    CHECK(loose_indices(a) == loose_indices(f));
    CHECK(loose_indices(b) == loose_indices(f));
    CHECK(F(to_string(a)) == a);
    CHECK(F(to_string(b)) == b);
    // Substituting back is the identity when the replacement is fresh.
    Formula c = substitute_term(f, TermKind::Var, "y", Term::var("fresh"));
    CHECK(substitute_term(c, TermKind::Var, "fresh", Term::var("y")) == f);
  }
}
