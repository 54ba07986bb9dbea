#ifndef HYLL_TEMPORAL_HPP
#define HYLL_TEMPORAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "hyll/biomodel.hpp"
#include "hyll/formula.hpp"

namespace hyll {

enum class TemporalOp { X, F, G, U, H, O, AX, AG, AF, AU };

const char* to_string(TemporalOp op);
std::optional<TemporalOp> temporal_op(const std::string& name);
bool is_path_op(TemporalOp op);

// State operators.
Formula next(const Formula& p);                    // dn u. (P @@ u.1)
Formula eventually(const Formula& p);              // diamond
Formula globally(const Formula& p);                // box
Formula historically(const Formula& p);            // dn u. allw w. (P @@ u - w)
Formula once(const Formula& p);                    // dn u. exw w. (P @@ u - w)
// dn u. (P2 @@ u.v) * (P1 @@ u.0 & ... & P1 @@ u.(v-1)). The bounded
// quantifier over w < v only unfolds for a numeral v.
Formula until(const Formula& p1, const Formula& p2, const WorldExpr& v);

// The per-rule step (fireable(r) & body) + not_fireable(r).
Formula guarded(const FireablePair& r, const Formula& body);
// The same shape over slots, for case analysis in the prover.
Formula guarded_template(const std::string& prefix, const Formula& body);

// One obligation per rule.
std::vector<Formula> ax_obligations(const Formula& p, const std::vector<FireablePair>& rules);
// Obligations L -o (fireable(r) & delay(1) R) + not_fireable(r).
std::vector<Formula> ag_step_obligations(const Formula& l, const Formula& r, const std::vector<FireablePair>& rules);
// Nested expansions with bound k. Inner rule quantifiers become & over the
// rule set, guards shifted to the step they belong to.
Formula af_expansion(const Formula& p, int k, const std::vector<FireablePair>& rules);
Formula au_expansion(const Formula& p1, const Formula& p2, int k, const std::vector<FireablePair>& rules);

struct TemporalSpec {
  TemporalOp op = TemporalOp::X;
  std::vector<Formula> args;
  std::optional<int> k;                       // AF, AU; also the U distance
  std::optional<std::vector<FireablePair>> ruleset;
};

struct Encoded {
  // AX: one per rule; AG: the base P followed by one step per rule;
  // everything else: a single formula.
  std::vector<Formula> obligations;
  std::vector<std::string> labels;
};

// Throws Arity for missing arguments, bound or rule set, and
// UnboundedBoundedQuantifier for U without a distance.
Encoded encode(const TemporalSpec& spec);

enum class OscillationMode { Formula1, FormulaH, Meta };

struct Oscillation {
  std::optional<Formula> formula;  // Formula1, FormulaH
  std::vector<Sequent> goals;      // Meta
};

Oscillation oscillation(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v,
                        OscillationMode mode, const WorldExpr& w = WorldExpr::free("w"),
                        const std::vector<Judgement>& gamma = {});

}  // namespace hyll

#endif
