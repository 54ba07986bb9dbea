#ifndef HYLL_PROVER_HPP
#define HYLL_PROVER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyll/certificate.hpp"
#include "hyll/kernel.hpp"
#include "hyll/parser.hpp"
#include "hyll/tactic.hpp"

namespace hyll {

// Unification store shared by all goals of a proof state. Metavariables and
// eigenvariables carry creation stamps: a metavariable may only be bound to
// an expression whose eigenvariables are older than itself.
class MetaStore {
 public:
  const WorldBindings& worlds() const { return worlds_; }
  const TermBindings& terms() const { return terms_; }

  void declare_meta(const std::string& name, bool world);
  void declare_rigid(const std::string& name);
  std::string new_meta(bool world, const std::string& hint = "m");
  // Fresh eigenvariable name avoiding every known name and `avoid`.
  std::string new_eigen(const std::string& hint, const FreeNames& avoid);
  bool known(const std::string& name) const { return stamp_.count(name) != 0; }
  bool is_world_meta(const std::string& name) const { return world_metas_.count(name) != 0; }

  WorldExpr resolve(const WorldExpr& w) const;
  Term resolve(const Term& t) const;
  Formula resolve(const Formula& f) const;
  Judgement resolve(const Judgement& j) const;
  Sequent resolve(const Sequent& s) const;

  bool unify(const Term& a, const Term& b);
  bool unify(const WorldExpr& a, const WorldExpr& b);
  // Atoms with their worlds; predicate and arity must agree.
  bool unify_atoms(const Judgement& a, const Judgement& b);

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

 private:
  struct Entry {
    enum class Kind { World, Term, Stamp, Create } kind;
    std::string name;
    std::uint32_t old = 0;
  };
  WorldBindings worlds_;
  TermBindings terms_;
  std::map<std::string, std::uint32_t> stamp_;
  std::set<std::string> world_metas_;
  std::uint32_t clock_ = 1;
  std::uint32_t counter_ = 0;
  std::vector<Entry> trail_;

  std::uint32_t create(const std::string& name);
  bool scope_ok(const std::string& meta, const std::set<std::string>& free_names,
                const std::set<std::string>& metas);
  bool bind_world(const std::string& meta, const WorldExpr& value);
  bool bind_term(const std::string& meta, const Term& value);
};

// Static context of a proving session: parsing context, named unrestricted
// hypotheses and rule-indexed formula families for case analysis.
struct ProverContext {
  ParseContext parse;
  std::vector<std::pair<std::string, Judgement>> labels;
  std::map<std::string, std::vector<Formula>> families;
  std::size_t case_count = 0;
  std::vector<std::string> case_labels;
  bool allow_cut = false;

  const Judgement* labelled(const std::string& name) const;
};

// A rule instance together with the premises it demands.
struct Instance {
  Rule rule = Rule::Init;
  int principal = -1;
  std::vector<int> split;
  Witness witness;
  std::string fresh;
  std::optional<Judgement> cut;
  int cut_kind = 1;
  std::vector<Sequent> premises;
};

// Fills inst.premises for the conclusion s; throws RuleNotApplicable.
// init is not handled here since it needs unification.
void build_premises(const Sequent& s, Instance& inst);
bool rule_is_invertible(Rule r);
// Connective consumed by a left rule, or nullopt for right rules.
std::optional<std::vector<Conn>> left_connectives(Rule r);

// Replaces rule slots with member i of their family.
Formula expand_slots(const Formula& f, const ProverContext& ctx, std::size_t i);
Sequent expand_slots(const Sequent& s, const ProverContext& ctx, std::size_t i);
bool has_slots(const Sequent& s);

struct PNode {
  bool open = true;
  bool is_case = false;
  Sequent conclusion;
  Instance inst;  // premises unused; children hold them
  std::vector<int> children;
  std::optional<std::size_t> case_index;
};

struct GoalView {
  int id = 0;
  Sequent sequent;
  std::optional<std::size_t> case_index;
  std::string case_label;
};

struct AutoOptions {
  int depth = 5;
  std::optional<std::vector<std::string>> using_labels;
  std::size_t budget = 2000000;
};

class ProofState {
 public:
  ProofState() = default;
  static ProofState create(std::shared_ptr<const ProverContext> ctx, const std::vector<Sequent>& goals,
                           std::vector<std::string> root_labels = {});

  const ProverContext& context() const { return *ctx_; }
  std::shared_ptr<const ProverContext> context_ptr() const { return ctx_; }
  const std::vector<int>& open_goals() const { return goals_; }
  bool complete() const { return goals_.empty(); }
  std::vector<GoalView> goals() const;
  Sequent goal_sequent(int id) const;
  const MetaStore& metas() const { return metas_; }
  // Declared goal metavariables with their current values, if bound.
  std::vector<std::pair<std::string, std::optional<std::string>>> witnesses() const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend class Engine;
  friend Certificate extract_certificate(const ProofState& ps);

  std::shared_ptr<const ProverContext> ctx_;
  std::vector<std::shared_ptr<const PNode>> nodes_;
  std::vector<int> roots_;
  std::vector<std::string> root_labels_;
  std::vector<int> goals_;
  std::vector<std::string> declared_;
  MetaStore metas_;
};

// Applies t to the given open goal (default: the first). The input state is
// never modified; failures throw Error with RuleNotApplicable,
// AmbiguousPrincipal, UnificationFailed or NotFound.
ProofState apply_tactic(const ProofState& ps, const Tactic& t, std::optional<int> goal = std::nullopt);
ProofState auto_search(const ProofState& ps, int goal, const AutoOptions& opt);

// Throws OpenGoals or UnresolvedMetavariable.
Certificate extract_certificate(const ProofState& ps);

}  // namespace hyll

#endif
