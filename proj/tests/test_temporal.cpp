#include <fstream>
#include <sstream>

#include "doctest.h"
#include "formula_gen.hpp"
#include "hyll/derived.hpp"
#include "hyll/prover.hpp"
#include "hyll/temporal.hpp"

using namespace hyll;

namespace {

Formula F(const std::string& s) { return parse_formula(s, ParseContext{}); }

BioModel p53() {
  std::ifstream in(std::string(HYLL_SOURCE_DIR) + "/data/p53.bio");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

ErrorKind encode_error(const TemporalSpec& spec) {
  try {
    encode(spec);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("encoded without error");
  return ErrorKind::Parse;
}

const std::vector<FireablePair> one_rule = {{F("f"), F("nf")}};

}  // namespace

TEST_CASE("state operators") {
  Formula p = F("p");
  CHECK(next(p) == F("dn u. (p @@ u.1)"));
  CHECK(globally(p) == F("dn u. allw w. (p @@ u.w)"));
  CHECK(eventually(p) == F("dn u. exw w. (p @@ u.w)"));
  CHECK(historically(p) == F("dn u. allw w. (p @@ u - w)"));
  CHECK(once(p) == F("dn u. exw w. (p @@ u - w)"));
  CHECK(until(p, F("q"), WorldExpr::nat(2)) == F("dn u. (q @@ u.2) * ((p @@ u) & (p @@ u.1))"));
  CHECK(until(p, F("q"), WorldExpr::nat(0)) == F("dn u. (q @@ u) * top"));
}

TEST_CASE("until rejects a symbolic distance") {
  CHECK_THROWS_AS(until(F("p"), F("q"), WorldExpr::free("v")), Error);
  try {
    until(F("p"), F("q"), WorldExpr::meta("v"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundedBoundedQuantifier);
  }
  TemporalSpec s{TemporalOp::U, {F("p"), F("q")}, std::nullopt, std::nullopt};
  CHECK(encode_error(s) == ErrorKind::UnboundedBoundedQuantifier);
}

TEST_CASE("spec validation") {
  CHECK(encode_error({TemporalOp::AX, {F("p")}, std::nullopt, std::nullopt}) == ErrorKind::Arity);
  CHECK(encode_error({TemporalOp::AF, {F("p")}, std::nullopt, one_rule}) == ErrorKind::Arity);
  CHECK(encode_error({TemporalOp::AF, {F("p")}, 0, one_rule}) == ErrorKind::Arity);
  CHECK(encode_error({TemporalOp::AU, {F("p")}, 1, one_rule}) == ErrorKind::Arity);
  CHECK(encode_error({TemporalOp::AX, {F("p")}, std::nullopt, std::vector<FireablePair>{}}) == ErrorKind::Arity);
  CHECK(encode_error({TemporalOp::X, {}, std::nullopt, std::nullopt}) == ErrorKind::Arity);
  CHECK(temporal_op("AU") == TemporalOp::AU);
  CHECK_FALSE(temporal_op("EX"));
}

TEST_CASE("AX over the six rules gives the per-rule case obligations") {
  CompiledModel c = compile_system(p53());
  Formula p = F("abs(p53) * pres(Mdm2) * abs(DNAdam)");
  Encoded e = encode({TemporalOp::AX, {p}, std::nullopt, c.fireable});
  REQUIRE(e.obligations.size() == 6);
  CHECK(e.labels[3] == "rule 4");

  ProverContext ctx;
  ctx.case_count = 6;
  for (const auto& f : c.fireable) {
    ctx.families["fireable"].push_back(f.fireable);
    ctx.families["not_fireable"].push_back(f.not_fireable);
  }
  Formula tmpl = parse_formula("(fireable[r] & delay(1) (abs(p53) * pres(Mdm2) * abs(DNAdam))) + not_fireable[r]", ctx.parse);
  CHECK(guarded_template("", next(p)) == tmpl);
  for (std::size_t i = 0; i < 6; ++i) CHECK(e.obligations[i] == expand_slots(tmpl, ctx, i));
}

TEST_CASE("AG is a base obligation plus one step per rule") {
  Formula p = F("p");
  Encoded e = encode({TemporalOp::AG, {p}, std::nullopt, one_rule});
  REQUIRE(e.obligations.size() == 2);
  CHECK(e.labels == std::vector<std::string>{"base", "rule 1"});
  CHECK(e.obligations[0] == p);
  CHECK(e.obligations[1] == F("p -o (f & delay(1) p) + nf"));
  CHECK(ag_step_obligations(F("l"), F("r"), one_rule)[0] == F("l -o (f & delay(1) r) + nf"));
}

TEST_CASE("AF and AU bounded expansions") {
  Formula p = F("p");
  CHECK(af_expansion(p, 1, one_rule) == F("p + ((f & delay(1) p) + nf)"));
  CHECK(af_expansion(p, 2, one_rule) ==
        F("p + ((f & (delay(1) p + ((delay(1) f & delay(2) p) + delay(1) nf))) + nf)"));
  std::vector<FireablePair> two = {{F("f1"), F("n1")}, {F("f2"), F("n2")}};
  CHECK(af_expansion(p, 1, two) == F("p + (((f1 & delay(1) p) + n1) & ((f2 & delay(1) p) + n2))"));

  Formula q = F("q");
  CHECK(au_expansion(p, q, 1, one_rule) == F("q + (p * ((f & delay(1) q) + nf))"));
  CHECK(au_expansion(p, q, 2, one_rule) ==
        F("q + (p * ((f & (delay(1) q + (delay(1) p * ((delay(1) f & delay(2) q) + delay(1) nf)))) + nf))"));
  CHECK(encode({TemporalOp::AF, {p}, 2, one_rule}).obligations[0] == af_expansion(p, 2, one_rule));
}

TEST_CASE("encodings stay in the core grammar") {
  ClosedGen gen(5);
  std::vector<FireablePair> rules = {{F("f1"), F("n1")}, {F("f2"), F("n2")}};
  for (int i = 0; i < 200; ++i) {
    Formula p = gen.formula(3);
    Formula q = gen.formula(3);
    for (int op = 0; op < 10; ++op) {
      TemporalSpec s{static_cast<TemporalOp>(op), {p}, 1 + i % 3, rules};
      if (s.op == TemporalOp::U || s.op == TemporalOp::AU) s.args.push_back(q);
      for (const auto& f : encode(s).obligations) {
        INFO(to_string(f));
        CHECK_FALSE(f.has_slots());
        CHECK_FALSE(f.has_loose());
        CHECK_FALSE(f.has_metas());
        CHECK(F(to_string(f)) == f);
      }
    }
  }
}

TEST_CASE("oscillation modes") {
  Formula a = F("a"), b = F("b");
  WorldExpr zero = WorldExpr::nat(0);
  Oscillation o1 = oscillation(a, b, zero, zero, OscillationMode::Formula1);
  REQUIRE(o1.formula);
  CHECK(*o1.formula == F("a & (delay(0) (b & delay(0) a)) & (a & b -o 0)"));
  CHECK(oscillation(a, b, WorldExpr::nat(1), WorldExpr::nat(2), OscillationMode::FormulaH).formula ==
        F("dag ((a -o delay(1) b) & (b -o delay(2) a)) & (a & b -o 0)"));

  Formula s0 = F("abs(p53) * pres(Mdm2) * pres(DNAdam)");
  Formula s1 = F("pres(p53) * abs(Mdm2)");
  Oscillation meta = oscillation(s0, s1, WorldExpr::meta("u"), WorldExpr::meta("v"), OscillationMode::Meta);
  REQUIRE(meta.goals.size() == 3);
  ParseContext pc;
  CHECK(to_string(meta.goals[0]) == to_string(parse_sequent(". ; abs(p53) * pres(Mdm2) * pres(DNAdam) @ w |- pres(p53) * abs(Mdm2) @ w.?u", pc)));
  CHECK(to_string(meta.goals[1]) == to_string(parse_sequent(". ; pres(p53) * abs(Mdm2) @ w.?u |- abs(p53) * pres(Mdm2) * pres(DNAdam) @ w.?u.?v", pc)));
  CHECK_FALSE(meta.formula);
}

TEST_CASE("exclusion of presence and absence follows from well-definedness") {
  auto ctx = std::make_shared<ProverContext>();
  std::vector<Judgement> gamma = {{well_defined0(), WorldExpr::free("w")}, {well_defined1(), WorldExpr::free("w")}};
  Oscillation meta = oscillation(pres("x"), abs_("x"), WorldExpr::nat(1), WorldExpr::nat(1), OscillationMode::Meta,
                                 WorldExpr::free("w"), gamma);
  ProofState ps = ProofState::create(ctx, {meta.goals[2]});
  AutoOptions opt;
  opt.depth = 7;
  ProofState done = auto_search(ps, ps.open_goals()[0], opt);
  CHECK(done.complete());
  CHECK(check_certificate(extract_certificate(done)).ok);

  // wd0 alone does not suffice: & yields only one of the two atoms.
  ProofState lone = ProofState::create(ctx, {oscillation(pres("x"), abs_("x"), WorldExpr::nat(1), WorldExpr::nat(1),
                                                         OscillationMode::Meta, WorldExpr::free("w"), {gamma[0]})
                                                 .goals[2]});
  CHECK_THROWS_AS(auto_search(lone, lone.open_goals()[0], opt), Error);
}
