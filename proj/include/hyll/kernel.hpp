#ifndef HYLL_KERNEL_HPP
#define HYLL_KERNEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyll/formula.hpp"

namespace hyll {

enum class Rule : std::uint8_t {
  Init, Copy, TensorR, TensorL, OneR, OneL, LimpR, LimpL, TopR, ZeroL,
  WithR, WithL1, WithL2, OplusR1, OplusR2, OplusL,
  ForallR, ForallL, ExistsR, ExistsL, BangR, BangL, AtR, AtL, DownR, DownL, Cut,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);
const std::vector<Rule>& all_rules();

using Witness = std::variant<std::monostate, Term, WorldExpr>;

struct Derivation {
  Rule rule = Rule::Init;
  Sequent conclusion;
  // Index into conclusion delta for left rules, into gamma for copy.
  int principal = -1;
  // Conclusion delta indices sent to the first premise (tensorR, limpL, linear cut).
  std::vector<int> split;
  Witness witness;
  std::string fresh;
  std::optional<Judgement> cut;
  // 1: linear cut formula, 2: the cut formula goes to gamma.
  int cut_kind = 1;
  std::vector<Derivation> premises;

  std::size_t size() const;
};

enum class CheckReason : std::uint8_t {
  BadPrincipal,
  FormulaMismatch,
  WorldMismatch,
  ContextMismatch,
  BadSplit,
  FreshnessViolated,
  BadWitness,
  WrongPremiseCount,
  NonEmptyContext,
  CutDisallowed,
  UnresolvedMetavariable,
  UnresolvedSlot,
};

const char* to_string(CheckReason r);

struct CheckError {
  std::vector<int> path;
  CheckReason reason = CheckReason::BadPrincipal;
  std::string detail;
};

std::string to_string(const CheckError& e);

// Empty result means the derivation is a correct proof of its conclusion.
std::optional<CheckError> check_derivation(const Derivation& d, bool allow_cut);

// Cut-free derivation of  . ; a@w |- a@w.
Derivation identity_expansion(const Formula& a, const WorldExpr& w);

// Counts of each rule tag in d.
std::vector<std::size_t> rule_census(const Derivation& d);

}  // namespace hyll

#endif
