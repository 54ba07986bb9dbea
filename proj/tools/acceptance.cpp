// Acceptance run: one line per criterion, exit status counts unexpected failures.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "formula_gen.hpp"
#include "hyll/script.hpp"
#include "hyll/temporal.hpp"
#include "hyll/transform.hpp"

using namespace hyll;

namespace {

const std::string kRoot = HYLL_SOURCE_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return kRoot + "/data/" + name; }

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Every certificate built during the run, rechecked by the certified-prover line.
std::vector<Certificate> g_certs;

Certificate keep(Certificate c) {
  g_certs.push_back(c);
  return c;
}

bool checks(const Certificate& c) { return !c.allow_cut && check_certificate(c).ok; }

bool checks(const Derivation& d) { return !check_derivation(d, false).has_value(); }

void fired(const Derivation& d, const CompiledModel& c, std::vector<int>& out) {
  if (d.rule == Rule::Copy) {
    const Judgement& j = d.conclusion.gamma[static_cast<std::size_t>(d.principal)];
    for (std::size_t i = 0; i < c.rules.size(); ++i)
      if (j == c.gamma[i]) out.push_back(static_cast<int>(i + 1));
  }
  for (const auto& p : d.premises) fired(p, c, out);
}

void choices_by_branch(const Derivation& d, const Formula& l, int branch, std::vector<std::pair<int, bool>>& out) {
  if (d.rule == Rule::OplusL && d.conclusion.delta[static_cast<std::size_t>(d.principal)].formula == l) {
    for (std::size_t i = 0; i < d.premises.size(); ++i) choices_by_branch(d.premises[i], l, static_cast<int>(i + 1), out);
    return;
  }
  if (d.rule == Rule::OplusR1 || d.rule == Rule::OplusR2) {
    const Formula& g = d.conclusion.goal.formula;
    if (g.conn() == Conn::Oplus && g.left().conn() == Conn::With) out.push_back({branch, d.rule == Rule::OplusR1});
  }
  for (const auto& p : d.premises) choices_by_branch(p, l, branch, out);
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "[" + s + "]";
}

Outcome golden_compilation() {
  int matched = 0;
  for (const char* name : {"p53", "p53_strong"}) {
    BioModel m = parse_model(slurp(data(std::string(name) + ".bio")));
    std::string got = dump_compiled(m, compile_system(m));
    if (got != slurp(kRoot + "/tests/golden/" + name + ".compiled")) return {false, std::string(name) + " differs from golden"};
    ++matched;
  }
  return {true, std::to_string(matched) + " models match their goldens exactly"};
}

Outcome property1(const char* file) {
  ProofScript s = load_script(data(file));
  Certificate c = keep(run_script(s));
  if (!checks(c)) return {false, "certificate rejected"};
  std::map<std::string, std::string> want{{"u", "2"}, {"v", "2"}};
  if (c.witnesses != want) return {false, "witnesses differ from u=2, v=2"};
  return {true, std::to_string(c.obligations.size()) + " obligation(s); u=2 v=2"};
}

Outcome property2() {
  ProofScript s = load_script(data("property2.hp"));
  Certificate c = keep(run_script(s));
  if (!checks(c)) return {false, "certificate rejected"};
  int u = std::stoi(c.witnesses.at("u"));
  std::vector<int> rules;
  fired(c.obligations[0].proof, *s.compiled, rules);
  std::string goal = c.obligations[0].proof.conclusion.goal.world.to_string();
  bool ok = u == 4 && u < 5 && goal == "w.4";
  return {ok, "u=" + std::to_string(u) + ", goal world " + goal + ", rules " + join(rules)};
}

Outcome property3() {
  ProofScript s = load_script(data("property3.hp"));
  Certificate c = keep(run_script(s));
  if (!checks(c)) return {false, "certificate rejected"};
  if (c.obligations.size() != 7) return {false, "expected base obligation plus six cases"};
  std::vector<int> taken;
  for (std::size_t r = 1; r <= 6; ++r) {
    std::vector<bool> ch = guarded_choices(c.obligations[r].proof);
    if (ch.size() != 1) return {false, "case " + std::to_string(r) + " has " + std::to_string(ch.size()) + " choices"};
    if (ch[0]) taken.push_back(static_cast<int>(r));
  }
  return {taken == std::vector<int>{4, 6}, "both statements proved; fireable branch for rules " + join(taken)};
}

Outcome property4() {
  ProofScript s = load_script(data("property4.hp"));
  Certificate c = keep(run_script(s));
  if (!checks(c)) return {false, "certificate rejected"};
  Formula l = s.ctx->parse.abbreviations.at("L");
  std::vector<int> by[3];
  for (std::size_t r = 0; r < c.obligations.size(); ++r) {
    std::vector<std::pair<int, bool>> ch;
    choices_by_branch(c.obligations[r].proof, l, 0, ch);
    std::set<int> hit;
    for (auto [branch, fire] : ch)
      if (fire) hit.insert(branch);
    for (int b : hit) by[b].push_back(static_cast<int>(r + 1));
  }
  bool ok = c.obligations.size() == 6 && by[0].empty() && by[1] == std::vector<int>{1, 4, 5} &&
            by[2] == std::vector<int>{2, 6};
  return {ok, "pres/pres fires " + join(by[1]) + ", abs/abs fires " + join(by[2])};
}

Outcome consistency() {
  auto ctx = std::make_shared<ProverContext>();
  ProofState ps = ProofState::create(ctx, {parse_sequent(". ; . |- 0 @ w", ctx->parse)});
  AutoOptions opt;
  opt.depth = 6;
  try {
    keep(extract_certificate(auto_search(ps, 0, opt)));
    return {false, "found a proof of 0"};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotFound) return {false, e.what()};
  }
  return {true, "exhaustive search to depth 6 returns NotFound"};
}

Outcome identity_fuzz() {
  ClosedGen gen(2024);
  int ok = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.sized(12);
    Derivation d = identity_expansion(f, WorldExpr::free("w"));
    Certificate c;
    c.obligations.push_back({"identity", std::nullopt, d});
    keep(c);
    if (checks(d) && rule_census(d)[static_cast<std::size_t>(Rule::Cut)] == 0) ++ok;
  }
  return {ok == 200, std::to_string(ok) + "/200 identity expansions check cut-free"};
}

// Searches for a proof of the sequent as the relocation statement shifts it.
std::string relocated_search(const Sequent& s) {
  Sequent shifted = s;
  shifted.gamma.clear();
  for (auto& j : shifted.delta) j.world = compose(WorldExpr::nat(1), j.world);
  shifted.goal.world = compose(WorldExpr::nat(1), shifted.goal.world);
  auto ctx = std::make_shared<ProverContext>();
  AutoOptions opt;
  opt.depth = 6;
  opt.using_labels = std::vector<std::string>{};
  try {
    auto_search(ProofState::create(ctx, {shifted}), 0, opt);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotFound) return " (shifted sequent has no proof at depth 6 without gamma copies)";
    return std::string(" (search on shifted sequent failed: ") + e.what() + ")";
  }
  return " (shifted sequent is provable)";
}

Outcome transformers() {
  int checked = 0;
  std::vector<std::string> failures;
  const Judgement extra{Formula::atom("spare"), WorldExpr::nat(0)};
  for (const char* file : {"property1_v1.hp", "property1_v2.hp", "property2.hp", "property3.hp", "property4.hp"}) {
    Certificate c = run_script(load_script(data(file)));
    for (const Obligation& o : c.obligations) {
      std::string where = std::string(file) + ":" + o.label;
      const Derivation& d = o.proof;
      Derivation w = weaken(d, {extra});
      Derivation ct = d;
      if (!d.conclusion.gamma.empty()) ct = contract(weaken(d, {d.conclusion.gamma[0]}), d.conclusion.gamma[0]);
      Certificate t;
      t.obligations = {{o.label + "/weaken", o.case_index, w}, {o.label + "/contract", o.case_index, ct}};
      try {
        t.obligations.push_back({o.label + "/relocate", o.case_index, relocate(d, WorldExpr::nat(1))});
      } catch (const Error& e) {
        failures.push_back(where + " relocate: " + to_string(e.kind()) + relocated_search(d.conclusion));
      }
      keep(t);
      CertificateVerdict v = check_certificate(t);
      if (!v.ok) failures.push_back(where + " " + t.obligations[static_cast<std::size_t>(v.obligation)].label);
      if (!multiset_equal(ct.conclusion.gamma, d.conclusion.gamma)) failures.push_back(where + " contract changed gamma");
      checked += static_cast<int>(t.obligations.size());
    }
  }
  std::string detail = std::to_string(checked) + " transformed derivations check";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome oracle() {
  BioModel m = parse_model(slurp(data("p53.bio")));
  TransitionSystem ts = oracle_transitions(m);
  const auto& v = m.vars;
  BoolState s0 = parse_state("!p53 Mdm2 DNAdam", v);
  BoolState quiet = parse_state("!p53 Mdm2 !DNAdam", v);
  std::vector<std::string> bad;
  if (ts.state_count() != 8) bad.push_back("state count");
  auto to_state1 = follow_path(ts, s0, {1, 2});
  if (!to_state1 || !parse_state_predicate("p53 !Mdm2", v)(*to_state1)) bad.push_back("path [1,2]");
  if (follow_path(ts, s0, {1, 2, 3, 4}) != s0) bad.push_back("round trip [1,2,3,4]");
  if (follow_path(ts, s0, {1, 2, 5, 6}) != quiet) bad.push_back("repair [1,2,5,6]");
  std::vector<int> enabled;
  for (const Edge& e : ts.edges[quiet]) enabled.push_back(e.rule);
  if (!is_fixpoint(ts, quiet) || enabled != std::vector<int>{4, 6}) bad.push_back("fixpoint");

  BioModel strong = parse_model(slurp(data("p53_strong.bio")));
  TransitionSystem st = oracle_transitions(strong);
  auto balanced = [](BoolState s) { return (s & 1u) == ((s >> 1) & 1u); };
  int edges = 0;
  for (BoolState s = 0; s < st.state_count(); ++s) {
    if (!balanced(s)) continue;
    for (const Edge& e : st.edges[s]) {
      ++edges;
      if (balanced(e.to)) bad.push_back("balanced edge under rule " + std::to_string(e.rule));
    }
  }
  std::string detail = bad.empty() ? "paths, fixpoint (enabled " + join(enabled) + ") and " + std::to_string(edges) +
                                         " strong edges out of balanced states agree"
                                   : "mismatch:";
  for (const auto& b : bad) detail += " " + b;
  return {bad.empty(), detail};
}

Outcome down_commutation() {
  AutoOptions opt;
  opt.depth = 8;
  int proved = 0;
  for (const char* op : {"*", "&", "+"}) {
    std::string lhs = std::string("dn u. (p ") + op + " q)";
    std::string rhs = std::string("(dn u. p) ") + op + " (dn u. q)";
    for (const auto& [l, r] : {std::pair{lhs, rhs}, std::pair{rhs, lhs}}) {
      auto ctx = std::make_shared<ProverContext>();
      ProofState ps = ProofState::create(ctx, {parse_sequent(". ; " + l + " @ w |- " + r + " @ w", ctx->parse)});
      try {
        if (checks(keep(extract_certificate(auto_search(ps, 0, opt))))) ++proved;
      } catch (const Error&) {
      }
    }
  }
  return {proved == 6, std::to_string(proved) + "/6 directions proved by auto"};
}

struct Criterion {
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
  // Set when the criterion cannot hold as stated; decisions ledger has the analysis.
  bool known_unattainable = false;
};

}  // namespace

int main() {
  std::vector<Criterion> all = {
      {"golden-compilation", 1, golden_compilation},
      {"property1-v1", 10, [] { return property1("property1_v1.hp"); }},
      {"property1-v2", 10, [] { return property1("property1_v2.hp"); }},
      {"property2", 10, property2},
      {"property3", 30, property3},
      {"property4", 60, property4},
      {"consistency", 60, consistency},
      {"identity-fuzz", 30, identity_fuzz},
      {"structural-transformers", 10, transformers, true},
      {"oracle-cross-validation", 1, oracle},
      {"down-commutation", 10, down_commutation},
  };
  int unexpected = 0, failed = 0;
  auto report = [&](const Criterion& c, Outcome o, double secs) {
    bool in_time = secs < c.limit_s;
    bool pass = o.ok && in_time;
    if (!in_time) o.detail += "; over time limit";
    if (!pass) {
      ++failed;
      if (!c.known_unattainable) ++unexpected;
    }
    std::printf("%s  %-26s %9.3f s (limit %g s)  %s%s\n", pass ? "PASS" : "FAIL", c.name.c_str(), secs, c.limit_s,
                o.detail.c_str(), !pass && c.known_unattainable ? " [known]" : "");
  };
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(c, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  for (const auto& c : g_certs) ok += checks(c) ? 1 : 0;
  Outcome certified{ok == static_cast<int>(g_certs.size()),
                    std::to_string(ok) + "/" + std::to_string(g_certs.size()) + " certificates check with allow_cut=false"};
  report({"certified-prover", 60, nullptr}, certified,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  std::printf("%d/%zu criteria pass; %d unexpected failure(s)\n", static_cast<int>(all.size() + 1) - failed,
              all.size() + 1, unexpected);
  return unexpected == 0 ? 0 : 1;
}
