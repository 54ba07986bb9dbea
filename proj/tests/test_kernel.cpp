#include "doctest.h"
#include "formula_gen.hpp"
#include "hyll/certificate.hpp"
#include "hyll/parser.hpp"
#include "hyll/transform.hpp"

using namespace hyll;

namespace {

const ParseContext kCtx{};

Formula F(const std::string& s) { return parse_formula(s, kCtx); }
Judgement J(const std::string& s) { return parse_judgement(s, kCtx); }
WorldExpr W(const std::string& s) { return parse_world(s); }

Derivation node(Rule r, std::vector<Judgement> gamma, std::vector<Judgement> delta, Judgement goal) {
  Derivation d;
  d.rule = r;
  d.conclusion = Sequent{std::move(gamma), std::move(delta), std::move(goal)};
  return d;
}

Derivation init(const std::vector<Judgement>& gamma, const Judgement& j) { return node(Rule::Init, gamma, {j}, j); }

// p@w, q@w |- p * q @ w
Derivation tensor_fixture() {
  Derivation d = node(Rule::TensorR, {}, {J("p @ w"), J("q @ w")}, J("p * q @ w"));
  d.split = {0};
  d.premises = {init({}, J("p @ w")), init({}, J("q @ w"))};
  return d;
}

}  // namespace

TEST_CASE("init node checks with any gamma") {
  CHECK_FALSE(check_derivation(init({}, J("pres(a) @ w")), false).has_value());
  CHECK_FALSE(check_derivation(init({J("q @ 0")}, J("pres(a) @ w")), false).has_value());

  Derivation d = node(Rule::Init, {}, {J("pres(a) @ w")}, J("pres(a) @ w.1"));
  auto e = check_derivation(d, false);
  REQUIRE(e);
  CHECK(e->reason == CheckReason::WorldMismatch);

  Derivation two = node(Rule::Init, {}, {J("p @ w"), J("p @ w")}, J("p @ w"));
  CHECK(check_derivation(two, false)->reason == CheckReason::ContextMismatch);
}

TEST_CASE("tensorR with an explicit split") {
  CHECK_FALSE(check_derivation(tensor_fixture(), false).has_value());

  Derivation swapped = tensor_fixture();
  swapped.split = {1};
  auto e = check_derivation(swapped, false);
  REQUIRE(e);
  CHECK(e->reason == CheckReason::ContextMismatch);
  CHECK(e->detail.find("premise 0") != std::string::npos);

  Derivation bad = tensor_fixture();
  bad.split = {0, 0};
  CHECK(check_derivation(bad, false)->reason == CheckReason::BadSplit);
  bad.split = {5};
  CHECK(check_derivation(bad, false)->reason == CheckReason::BadSplit);
}

TEST_CASE("error paths point at the failing node") {
  Derivation d = tensor_fixture();
  d.premises[1].conclusion.goal = J("q @ v");
  auto e = check_derivation(d, false);
  REQUIRE(e);
  CHECK(e->reason == CheckReason::WorldMismatch);
  CHECK(e->path.empty());

  Derivation deep = tensor_fixture();
  deep.premises[1].premises.push_back(init({}, J("q @ w")));
  e = check_derivation(deep, false);
  REQUIRE(e);
  CHECK(e->path == std::vector<int>{1});
  CHECK(e->reason == CheckReason::WrongPremiseCount);
}

TEST_CASE("freshness of eigenvariables") {
  // . ; q('y) @ w |- all x. q('x) ... needs a fresh name not equal to y.
  Derivation d = node(Rule::ForallR, {}, {J("q('y) @ w")}, J("all x. q('y) @ w"));
  d.fresh = "y";
  d.premises = {init({}, J("q('y) @ w"))};
  auto e = check_derivation(d, false);
  REQUIRE(e);
  CHECK(e->reason == CheckReason::FreshnessViolated);

  d.fresh = "z";
  CHECK_FALSE(check_derivation(d, false).has_value());

  // World eigenvariables are checked against worlds, including the goal world.
  Derivation w = node(Rule::ForallR, {}, {}, J("allw u. top @ v"));
  w.fresh = "v";
  w.premises = {node(Rule::TopR, {}, {}, J("top @ v"))};
  CHECK(check_derivation(w, false)->reason == CheckReason::FreshnessViolated);
}

TEST_CASE("witness kinds and metavariables") {
  Derivation d = node(Rule::ExistsR, {}, {J("q(a) @ w")}, J("ex x. q(x) @ w"));
  d.witness = WorldExpr::nat(1);
  d.premises = {init({}, J("q(a) @ w"))};
  CHECK(check_derivation(d, false)->reason == CheckReason::BadWitness);
  d.witness = Term::constant("a");
  CHECK_FALSE(check_derivation(d, false).has_value());

  Derivation m = init({}, J("p @ w.?u"));
  CHECK(check_derivation(m, false)->reason == CheckReason::UnresolvedMetavariable);
  Derivation s = node(Rule::TopR, {}, {}, J("fireable[r] & top @ w"));
  CHECK(check_derivation(s, false)->reason == CheckReason::UnresolvedSlot);
}

TEST_CASE("hybrid rules") {
  // (p @@ 3) @ w |- p @ 3 via atL.
  Derivation at = node(Rule::AtL, {}, {J("(p @@ 3) @ w")}, J("p @ 3"));
  at.principal = 0;
  at.premises = {init({}, J("p @ 3"))};
  CHECK_FALSE(check_derivation(at, false).has_value());

  // downR substitutes the goal world.
  Derivation dn = node(Rule::DownR, {}, {J("p @ 2")}, J("dn u. (p @@ u) @ 2"));
  dn.premises = {node(Rule::AtR, {}, {J("p @ 2")}, J("(p @@ 2) @ 2"))};
  dn.premises[0].premises = {init({}, J("p @ 2"))};
  CHECK_FALSE(check_derivation(dn, false).has_value());

  // Worlds are compared after canonicalization.
  Derivation canon = node(Rule::AtR, {}, {J("p @ w.1.1")}, J("(p @@ 2.w) @ 0"));
  canon.premises = {init({}, J("p @ w.2"))};
  CHECK_FALSE(check_derivation(canon, false).has_value());
}

TEST_CASE("cut is gated by the header flag") {
  Derivation c = node(Rule::Cut, {}, {J("p @ w")}, J("p @ w"));
  c.cut = J("p @ w");
  c.split = {0};
  c.premises = {init({}, J("p @ w")), init({}, J("p @ w"))};
  CHECK(check_derivation(c, false)->reason == CheckReason::CutDisallowed);
  CHECK_FALSE(check_derivation(c, true).has_value());
}

TEST_CASE("copy moves a gamma judgement to the end of delta") {
  Derivation d = node(Rule::Copy, {J("p @ w")}, {}, J("p @ w"));
  d.principal = 0;
  d.premises = {init({J("p @ w")}, J("p @ w"))};
  CHECK_FALSE(check_derivation(d, false).has_value());
  d.principal = 1;
  CHECK(check_derivation(d, false)->reason == CheckReason::BadPrincipal);
}

TEST_CASE("identity expansion shapes") {
  Derivation atom = identity_expansion(F("q(a)"), W("w"));
  CHECK(atom.rule == Rule::Init);
  CHECK(atom.size() == 1);

  Derivation t = identity_expansion(F("p * q(a)"), W("w"));
  CHECK(t.rule == Rule::TensorL);
  CHECK(t.premises[0].rule == Rule::TensorR);
  CHECK_FALSE(check_derivation(t, false).has_value());

  Derivation bang = identity_expansion(F("!(p -o q(b))"), W("3"));
  CHECK_FALSE(check_derivation(bang, false).has_value());
  Derivation quant = identity_expansion(F("all x. ex y. (q(x) & q(y))"), W("w"));
  CHECK_FALSE(check_derivation(quant, false).has_value());
  Derivation hybrid = identity_expansion(F("dn u. allw v. (p @@ u.v)"), W("w.1"));
  CHECK_FALSE(check_derivation(hybrid, false).has_value());
}

TEST_CASE("property: identity expansion of random closed formulas checks cut-free") {
  ClosedGen gen(97);
  std::size_t max_size = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.sized(12);
    max_size = std::max(max_size, f.size());
    WorldExpr w = i % 2 ? W("w") : W("2");
    Derivation d = identity_expansion(f, w);
    auto e = check_derivation(d, false);
    INFO(to_string(f));
    CHECK_FALSE(e.has_value());
    CHECK(rule_census(d)[static_cast<std::size_t>(Rule::Cut)] == 0);
    CHECK(d.conclusion.delta.size() == 1);
    CHECK(d.conclusion.goal == Judgement{f, w});
  }
  CHECK(max_size > 6);
}

TEST_CASE("property: propositional derivations at iota use no hybrid rules") {
  ClosedGen gen(5);
  int seen = 0;
  for (int i = 0; i < 300 && seen < 100; ++i) {
    Formula f = gen.sized(12);
    FreeNames names;
    collect_names(f, names);
    std::string text = to_string(f);
    if (text.find("@@") != std::string::npos || text.find("dn ") != std::string::npos ||
        text.find("allw") != std::string::npos || text.find("exw") != std::string::npos)
      continue;
    ++seen;
    auto census = rule_census(identity_expansion(f, WorldExpr::iota()));
    for (Rule r : {Rule::AtR, Rule::AtL, Rule::DownR, Rule::DownL}) CHECK(census[static_cast<std::size_t>(r)] == 0);
  }
  CHECK(seen > 20);
}

TEST_CASE("weaken") {
  Derivation d = tensor_fixture();
  Derivation same = weaken(d, {});
  CHECK(same.conclusion.gamma.empty());

  Derivation i = weaken(init({}, J("p @ w")), {J("r @ 0")});
  CHECK(i.rule == Rule::Init);
  CHECK(i.conclusion.gamma.size() == 1);
  CHECK_FALSE(check_derivation(i, false).has_value());

  // An extra hypothesis mentioning the eigenvariable forces a rename.
  Derivation q = identity_expansion(F("allw u. (p @@ u)"), W("w"));
  REQUIRE(q.fresh == "u");
  Derivation wq = weaken(q, {J("p @ u")});
  CHECK(wq.fresh != "u");
  CHECK_FALSE(check_derivation(wq, false).has_value());
}

TEST_CASE("contract") {
  Judgement j = J("r @ 0");
  Derivation d = init({j, j}, J("p @ w"));
  Derivation c = contract(d, j);
  CHECK(c.conclusion.gamma.size() == 1);
  CHECK_FALSE(check_derivation(c, false).has_value());
  CHECK_THROWS_AS(contract(init(std::vector<Judgement>{j}, J("p @ w")), j), Error);

  // Round trip through weaken.
  Derivation b = identity_expansion(F("!(p -o q(a))"), W("1"));
  Derivation g = weaken(b, {J("r @ 0")});
  Derivation back = contract(weaken(g, {J("r @ 0")}), J("r @ 0"));
  CHECK(back.conclusion.gamma.size() == g.conclusion.gamma.size());
  CHECK(multiset_equal(back.conclusion.gamma, g.conclusion.gamma));
  CHECK_FALSE(check_derivation(back, false).has_value());

  // Hand-built copy node addressing the second of two copies.
  Judgement bang_body = J("p @ w");
  Derivation cp = node(Rule::Copy, {bang_body, J("r @ 0"), bang_body}, {}, J("p @ w"));
  cp.principal = 2;
  cp.premises = {init({bang_body, J("r @ 0"), bang_body}, J("p @ w"))};
  REQUIRE_FALSE(check_derivation(cp, false).has_value());
  Derivation cc = contract(cp, bang_body);
  CHECK(cc.principal == 0);
  CHECK(cc.conclusion.gamma.size() == 2);
  CHECK_FALSE(check_derivation(cc, false).has_value());
}

TEST_CASE("relocate") {
  Derivation d = tensor_fixture();
  Derivation same = relocate(d, WorldExpr::iota());
  CHECK(same.conclusion.goal == d.conclusion.goal);

  Derivation i = relocate(init({}, J("p @ w")), W("3"));
  CHECK(i.rule == Rule::Init);
  CHECK(i.conclusion.goal == J("p @ w.3"));
  CHECK_FALSE(check_derivation(i, false).has_value());

  Derivation t = relocate(d, W("2"));
  CHECK(t.conclusion.delta[0] == J("p @ w.2"));
  CHECK_FALSE(check_derivation(t, false).has_value());

  // Absolute worlds have no anchor.
  CHECK_THROWS_AS(relocate(init({}, J("p @ 0")), W("1")), Error);
  CHECK_THROWS_AS(relocate(init({}, J("p @ w")), W("v")), Error);

  // The anchor may not occur inside formulas.
  Derivation at = node(Rule::AtL, {}, {J("(p @@ w) @ w")}, J("p @ w"));
  at.principal = 0;
  at.premises = {init({}, J("p @ w"))};
  REQUIRE_FALSE(check_derivation(at, false).has_value());
  CHECK_THROWS_AS(relocate(at, W("1")), Error);
}

TEST_CASE("property: transformers preserve checking") {
  ClosedGen gen(1234);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.sized(12);
    Derivation d = identity_expansion(f, W("w"));
    Judgement extra{gen.sized(6), W("0")};
    Derivation wk = weaken(d, {extra, extra});
    CHECK_FALSE(check_derivation(wk, false).has_value());
    Derivation ct = contract(wk, extra);
    CHECK_FALSE(check_derivation(ct, false).has_value());
    CHECK(ct.conclusion.gamma.size() == 1);
    FreeNames names;
    collect_names(f, names);
    if (!names.world_free.count("w")) {
      Derivation r = relocate(d, W("2"));
      CHECK_FALSE(check_derivation(r, false).has_value());
      CHECK(r.conclusion.goal.world == W("w.2"));
    }
  }
}

TEST_CASE("certificate round trip") {
  Certificate c;
  c.signature = {{"p", 0}, {"q", 0}, {"s", 1}};
  c.witnesses = {{"u", "2"}};
  c.obligations.push_back({"main", std::nullopt, identity_expansion(parse_formula("all x. ex y. (s(x) * !s(y))", kCtx), W("w.1"))});
  c.obligations.push_back({"case", 3, tensor_fixture()});
  std::string text = write_certificate(c);
  Certificate back = read_certificate(text);
  CHECK(write_certificate(back) == text);
  CHECK(back.obligations.size() == 2);
  CHECK(back.obligations[1].case_index == 3);
  CHECK(check_certificate(back).ok);
  CHECK(text.find("\"format\": \"hyll-certificate\"") != std::string::npos);

  Certificate broken = back;
  broken.obligations[1].proof.split = {};
  auto v = check_certificate(broken);
  CHECK_FALSE(v.ok);
  CHECK(v.obligation == 1);

  CHECK_THROWS_AS(read_certificate("{}"), Error);
  CHECK_THROWS_AS(read_certificate("not json"), Error);
  std::string undeclared = text;
  auto pos = undeclared.find("\"s\": 1");
  REQUIRE(pos != std::string::npos);
  undeclared.replace(pos, 6, "\"z\": 1");
  CHECK_THROWS_AS(read_certificate(undeclared), Error);
}

TEST_CASE("checking is deterministic") {
  Derivation d = identity_expansion(F("(p -o q(a)) & dn u. (p @@ u.1)"), W("w"));
  auto a = check_derivation(d, false);
  auto b = check_derivation(d, false);
  CHECK(a.has_value() == b.has_value());
  Derivation bad = d;
  bad.premises[0].premises[0].rule = Rule::WithL2;
  auto e1 = check_derivation(bad, false), e2 = check_derivation(bad, false);
  REQUIRE(e1);
  REQUIRE(e2);
  CHECK(e1->path == e2->path);
  CHECK(e1->reason == e2->reason);
}
