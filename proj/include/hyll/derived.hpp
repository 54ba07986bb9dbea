#ifndef HYLL_DERIVED_HPP
#define HYLL_DERIVED_HPP

#include <string>
#include <vector>

#include "hyll/formula.hpp"

namespace hyll {

// Derived connectives. They expand to core formulas; nothing downstream
// knows they existed.
Formula box(const Formula& a);                          // dn u. allw w. (A @@ u.w)
Formula diamond(const Formula& a);                      // dn u. exw w. (A @@ u.w)
Formula delay(const WorldExpr& v, const Formula& a);    // dn u. (A @@ u.v)
Formula dagger(const Formula& a);                       // allw u. (A @@ u)

Formula oscillate1(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v);
Formula oscillate_h(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v);

// Meta-level reading of oscillation: A@w |- B@w.u, B@w.u |- A@w.u.v and
// |- (A & B -o 0)@w, each over the given unrestricted zone.
std::vector<Sequent> oscillation_goals(const Formula& a, const Formula& b, const WorldExpr& u,
                                       const WorldExpr& v, const WorldExpr& w,
                                       const std::vector<Judgement>& gamma = {});

// Name-based dispatch used by tools: box, diamond, delay, dagger,
// oscillate1, oscillateH.
Formula expand_derived(const std::string& name, const std::vector<Formula>& formulas,
                       const std::vector<WorldExpr>& worlds);

// Right-nested folds; empty lists give the unit.
Formula tensor_all(const std::vector<Formula>& fs);  // 1 when empty
Formula with_all(const std::vector<Formula>& fs);    // top when empty
Formula oplus_all(const std::vector<Formula>& fs);   // 0 when empty

}  // namespace hyll

#endif
