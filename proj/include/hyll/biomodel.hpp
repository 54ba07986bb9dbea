#ifndef HYLL_BIOMODEL_HPP
#define HYLL_BIOMODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyll/formula.hpp"

namespace hyll {

enum class Polarity { Activation, Inhibition };
enum class Strength { Weak, General, Strong, Loop };
enum class Effect { Plain, Consume, StrongEffect };

struct BioRule {
  Polarity polarity = Polarity::Activation;
  Strength strength = Strength::General;
  Effect effect = Effect::Plain;
  std::string a;
  std::string b;
  int line = 0;
};

struct Literal {
  std::string var;
  bool present = true;
};

struct BioModel {
  std::vector<std::string> vars;
  std::vector<BioRule> rules;
  std::vector<Literal> initial;
};

bool operator==(const BioRule& x, const BioRule& y);
bool operator==(const BioModel& x, const BioModel& y);

// DSL:
//   vars p53 Mdm2 DNAdam;
//   rule general: DNAdam => !Mdm2;
//   rule strong consume: p53 =>c !DNAdam;
//   init !p53 Mdm2;
// `=>c` is shorthand for the consume modifier. A negated premise means the
// rule acts through absence (the strong-effect variant).
BioModel parse_model(const std::string& text);
// Throws Error(Model) on the first violated invariant.
void validate_model(const BioModel& m);

std::string rule_notation(const BioRule& r);

// Compilation to formulas. Sets fold with ⊗ in declared order.
Formula pres(const std::string& x);
Formula abs_(const std::string& x);
Formula literal(const Literal& l);
Formula dont_care(const std::string& x);
Formula dont_cares(const std::vector<std::string>& xs);  // 1 when empty
Formula unchanged(const std::string& x, const WorldExpr& w);
Formula unchanged(const std::vector<std::string>& xs, const WorldExpr& w);
Formula well_defined0();
Formula well_defined1();

Formula rule_premise(const BioRule& r);
Formula rule_conclusion(const BioRule& r);  // the a ⊗ b pair reached after one step
Formula compile_rule(const BioRule& r, const std::vector<std::string>& vars);

struct FireablePair {
  Formula fireable;
  Formula not_fireable;
};
FireablePair gen_fireable(const BioRule& r, const std::vector<std::string>& vars);

struct CompiledModel {
  std::string prefix;  // "s_" when every rule is strong
  std::vector<Formula> rules;
  std::vector<FireablePair> fireable;
  std::vector<Judgement> gamma;
  std::vector<std::string> gamma_labels;  // rule1..ruleN, wd0, wd1
  Judgement initial;
};

CompiledModel compile_system(const BioModel& m);

// Canonical definitions dump, one definition or judgement per line.
std::string dump_compiled(const BioModel& m, const CompiledModel& c);

// Explicit-state transition system. Bit i of a state is vars[i].
using BoolState = std::uint32_t;

struct Edge {
  int rule;  // 1-based
  BoolState to;
};

struct TransitionSystem {
  std::vector<std::string> vars;
  std::vector<std::vector<Edge>> edges;  // indexed by state, rules in order
  std::size_t state_count() const { return edges.size(); }
};

bool rule_enabled(const BioRule& r, const std::vector<std::string>& vars, BoolState s);
BoolState rule_apply(const BioRule& r, const std::vector<std::string>& vars, BoolState s);

// Rejects models with more than 20 variables.
TransitionSystem oracle_transitions(const BioModel& m);

// Literals must cover every variable.
BoolState parse_state(const std::string& text, const std::vector<std::string>& vars);
// Partial conjunction of literals; an empty text matches every state.
std::function<bool(BoolState)> parse_state_predicate(const std::string& text, const std::vector<std::string>& vars);
std::string state_to_string(BoolState s, const std::vector<std::string>& vars);

// Breadth-first search expanding rules in index order; returns a shortest
// path as 1-based rule indices.
std::optional<std::vector<int>> oracle_reach(const TransitionSystem& ts, BoolState from,
                                             const std::function<bool(BoolState)>& to, int bound);
// End state of a rule path, or nothing if some rule is not enabled.
std::optional<BoolState> follow_path(const TransitionSystem& ts, BoolState from, const std::vector<int>& rules);
// Every enabled rule at s leads back to s.
bool is_fixpoint(const TransitionSystem& ts, BoolState s);

}  // namespace hyll

#endif
